//! Growth of |κ(0)| with wavelength at fixed photon geometry.

use std::f64::consts::PI;

use slitpaths::sorkin::{kappa, Normalization};
use slitpaths::{validate, Preset};

fn main() -> slitpaths::Result<()> {
    let photon = validate(Preset::Photon.setup())?;
    for lambda in [810e-9, 2e-6, 8.1e-6, 20e-6, 81e-6] {
        let setup = photon.with_wavenumber(2.0 * PI / lambda)?;
        let k = kappa(&setup, 0.0, Normalization::CentralMax)?;
        println!("lambda = {:>8.2} um   |kappa(0)| = {:.4e}", lambda * 1e6, k.abs());
    }
    Ok(())
}
