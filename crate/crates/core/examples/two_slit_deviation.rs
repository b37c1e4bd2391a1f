//! Relative size of the looped amplitude in a two-slit experiment.

use slitpaths::experiment::SlitGeometry;
use slitpaths::sorkin::two_slit_loop_deviation;
use slitpaths::{validate, Preset};

fn main() -> slitpaths::Result<()> {
    let two = validate(Preset::Photon.setup())?.with(|e| e.geometry = SlitGeometry::double(100e-6, 30e-6))?;
    let k = two.wavenumber();
    for m in [1.0, 2.0, 4.0, 8.0] {
        let dev = two_slit_loop_deviation(&two.with_wavenumber(k / m)?, 0.0)?;
        println!("lambda x{m}: |psi_L| / |psi_A + psi_B| = {dev:.3e}");
    }
    Ok(())
}
