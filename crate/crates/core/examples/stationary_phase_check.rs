//! The reduced looped kernel against the one with the `z` integral done
//! numerically, as the wavenumber grows.

use slitpaths::kernels::{k2_pair, k2_pair_direct, OrderedSlitPair};
use slitpaths::quadrature::QuadratureSpec;
use slitpaths::{validate, Preset};

fn main() -> slitpaths::Result<()> {
    let photon = validate(Preset::Photon.setup())?;
    let pair = OrderedSlitPair::new(0, 2)?;
    let spacing = 100e-6;
    for kd in [100.0, 200.0, 400.0] {
        let k = kd / spacing;
        let reduced = k2_pair(&photon.with_wavenumber(k)?, pair, 0.0)?;
        let direct = k2_pair_direct(&photon, pair, 0.0, Some(k), &QuadratureSpec::default())?;
        println!(
            "k d = {kd:>5}: relative difference {:.3e}  (1/(k d) = {:.1e})",
            (reduced - direct).norm() / direct.norm(),
            1.0 / kd
        );
    }
    Ok(())
}
