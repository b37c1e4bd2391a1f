//! κ(y) across the central fringes of the photon preset.

use slitpaths::sorkin::{kappa_scan, Normalization};
use slitpaths::{validate, Preset};

fn main() -> slitpaths::Result<()> {
    let setup = validate(Preset::Photon.setup())?;
    let scan = kappa_scan(&setup, -1.5e-3, 1.5e-3, 61, Normalization::CentralMax)?;
    println!("{:>12} {:>12} {:>14}", "y [mm]", "I/I_max", "kappa");
    for i in 0..scan.len() {
        println!(
            "{:>12.4} {:>12.5} {:>14.5e}",
            scan.y_values[i] * 1e3,
            scan.intensity_normalized[i],
            scan.kappa_full[i]
        );
    }
    Ok(())
}
