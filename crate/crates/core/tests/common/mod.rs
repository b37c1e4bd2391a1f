#![allow(dead_code)]

use num_complex::Complex64;

/// Composite Simpson rule on `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * (h / 3.0)
}

/// `∫_a^b exp(i(p y² + q y)) dy` by dense Simpson sampling.
pub fn fresnel_simpson(p: f64, q: f64, a: f64, b: f64) -> Complex64 {
    let phase_span = (p.abs() * a.abs().max(b.abs()) * 2.0 + q.abs()) * (b - a);
    let n = ((phase_span * 200.0) as usize).max(20_000);
    simpson(|y| Complex64::from_polar(1.0, p * y * y + q * y), a, b, n + n % 2)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}
