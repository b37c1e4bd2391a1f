//! Folding two free propagators over an intermediate plane.

use std::f64::consts::PI;

use slitpaths::kernels::{free_propagator, huygens_compose};
use slitpaths::quadrature::QuadratureSpec;

fn main() -> slitpaths::Result<()> {
    let k = 2.0 * PI / 1e-6;
    let r1 = [0.0, 0.0, 0.0];
    let r3 = [0.2, 1e-4, -5e-5];
    let plane = 0.1;
    let direct = free_propagator(r1, r3, k)?;
    let p = 0.5 * k * (1.0 / plane + 1.0 / (r3[0] - plane));
    for zones in [10.0, 20.0, 30.0, 60.0] {
        let half = (zones * PI / p).sqrt();
        let folded = huygens_compose(r1, r3, plane, half, k, &QuadratureSpec::default())?;
        println!("{zones:>4} zones: relative error {:.3e}", (folded - direct).norm() / direct.norm());
    }
    Ok(())
}
