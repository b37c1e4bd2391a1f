//! Closed-form Gaussian-phase segments against brute-force Simpson sums.

use num_complex::Complex64;
use slitpaths::quadrature::fresnel_segment;

fn simpson(p: f64, q: f64, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let f = |y: f64| Complex64::from_polar(1.0, p * y * y + q * y);
    let inner: Complex64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * (h / 3.0)
}

fn main() -> slitpaths::Result<()> {
    for (p, q, a, b) in [(1.0, 0.0, -3.0, 3.0), (25.0, -4.0, 0.0, 1.5), (-8.0, 30.0, -1.0, 0.2), (1e-6, 2.0, 0.0, 1.0)] {
        let closed = fresnel_segment(p, q, a, b)?;
        let sampled = simpson(p, q, a, b, 400_000);
        println!("p={p:>6} q={q:>5} [{a}, {b}]: {closed:.10}  rel diff {:.1e}", (closed - sampled).norm() / sampled.norm());
    }
    Ok(())
}
