use num_complex::Complex64;

use super::erf::{complex_erfcx, eighth_turn};
use super::oscillatory::oscillatory_integrate_1d;
use super::QuadratureSpec;
use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Cancellation factor above which the erf form is abandoned for quadrature.
const MAX_CANCELLATION: f64 = 1e3;

/// `∫_a^b exp(i(p y² + q y)) dy`.
///
/// For `p != 0` the square is completed and the result written through the
/// scaled complementary error function, with each endpoint's phase
/// `p y² + q y` formed directly. If the endpoint terms cancel badly (almost
/// linear phase with a far-away stationary point) the integral is evaluated
/// by converged Gauss-Legendre quadrature instead.
pub fn fresnel_segment(p: f64, q: f64, a: f64, b: f64) -> Result<Complex64> {
    if !(p.is_finite() && q.is_finite() && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("fresnel_segment arguments must be finite".into()));
    }
    if a >= b {
        return Err(Error::Domain(format!("fresnel_segment needs a < b, got ({a}, {b})")));
    }
    if p == 0.0 {
        return Ok(linear_segment(q, a, b));
    }
    if p < 0.0 {
        return Ok(fresnel_segment(-p, -q, a, b)?.conj());
    }
    match closed_form(p, q, a, b)? {
        Some(v) => Ok(v),
        None => by_quadrature(p, q, a, b),
    }
}

/// `∫_a^b e^{iqy} dy`, written with a sinc so that small `q` loses nothing.
fn linear_segment(q: f64, a: f64, b: f64) -> Complex64 {
    let half = 0.5 * (b - a);
    let x = q * half;
    let sinc = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    Complex64::from_polar(2.0 * half * sinc, q * 0.5 * (a + b))
}

fn phase(p: f64, q: f64, y: f64) -> Complex64 {
    Complex64::from_polar(1.0, y * (p * y + q))
}

fn closed_form(p: f64, q: f64, a: f64, b: f64) -> Result<Option<Complex64>> {
    let root = p.sqrt();
    let shift = q / (2.0 * p);
    let rot = eighth_turn().conj();
    let sa = a + shift;
    let sb = b + shift;
    let ua = rot * (root * sa);
    let ub = rot * (root * sb);
    let scale = eighth_turn() * (SQRT_PI / (2.0 * root));

    let (terms, value) = if sa >= 0.0 {
        let ta = phase(p, q, a) * complex_erfcx(ua)?;
        let tb = phase(p, q, b) * complex_erfcx(ub)?;
        (ta.norm().max(tb.norm()), ta - tb)
    } else if sb <= 0.0 {
        let ta = phase(p, q, a) * complex_erfcx(-ua)?;
        let tb = phase(p, q, b) * complex_erfcx(-ub)?;
        (ta.norm().max(tb.norm()), tb - ta)
    } else {
        // Stationary point inside: erf(ub) - erf(ua) = 2 - erfc(ub) - erfc(-ua).
        let centre = Complex64::from_polar(2.0, -q * shift * 0.5);
        let ta = phase(p, q, a) * complex_erfcx(-ua)?;
        let tb = phase(p, q, b) * complex_erfcx(ub)?;
        (2.0_f64.max(ta.norm()).max(tb.norm()), centre - ta - tb)
    };
    let result = scale * value;
    if terms > MAX_CANCELLATION * value.norm() {
        return Ok(None);
    }
    Ok(Some(result))
}

fn by_quadrature(p: f64, q: f64, a: f64, b: f64) -> Result<Complex64> {
    let spec = QuadratureSpec {
        points_per_cycle: 20.0,
        rel_tolerance: 1e-14,
        max_refinements: 12,
    };
    oscillatory_integrate_1d(
        |y| phase(p, q, y),
        |y| (2.0 * p * y + q).abs(),
        (a, b),
        &spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Composite Simpson with `panels` (even) subintervals.
    fn simpson(p: f64, q: f64, a: f64, b: f64, panels: usize) -> Complex64 {
        let h = (b - a) / panels as f64;
        let f = |y: f64| Complex64::from_polar(1.0, p * y * y + q * y);
        let mut s = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += f(a + i as f64 * h) * w;
        }
        s * (h / 3.0)
    }

    #[test]
    fn constant_integrand() {
        assert_eq!(fresnel_segment(0.0, 0.0, 0.0, 1.0).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn linear_phase() {
        let v = fresnel_segment(0.0, PI, 0.0, 1.0).unwrap();
        assert!((v - c(0.0, 2.0 / PI)).norm() < 1e-15);
    }

    #[test]
    fn unit_quadratic_against_simpson() {
        let v = fresnel_segment(1.0, 0.0, 0.0, 1.0).unwrap();
        let oracle = simpson(1.0, 0.0, 0.0, 1.0, 1_000_000);
        assert!((v - oracle).norm() < 1e-12 * oracle.norm(), "{v} vs {oracle}");
    }

    #[test]
    fn full_gaussian_limit() {
        // ∫ e^{ipy²} over a wide symmetric window → sqrt(π/p) e^{iπ/4}
        let p = 3.0;
        let v = fresnel_segment(p, 0.0, -1e4, 1e4).unwrap();
        let limit = Complex64::from_polar((PI / p).sqrt(), 0.25 * PI);
        assert!((v - limit).norm() < 1e-4);
    }

    #[test]
    fn nearly_linear_phase_uses_stable_path() {
        // p tiny against q: stationary point far away.
        let p = 1e-9;
        let q = 7.0;
        let v = fresnel_segment(p, q, 0.0, 1.0).unwrap();
        let oracle = simpson(p, q, 0.0, 1.0, 200_000);
        assert!((v - oracle).norm() < 1e-11 * oracle.norm(), "{v} vs {oracle}");
    }

    #[test]
    fn rejects_empty_interval() {
        assert!(matches!(fresnel_segment(1.0, 0.0, 1.0, 1.0), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(p in -40.0..40.0f64, q in -40.0..40.0f64, a in -3.0..2.0f64, len in 0.1..3.0f64) {
            let f = fresnel_segment(p, q, a, a + len).unwrap();
            let g = fresnel_segment(-p, -q, a, a + len).unwrap().conj();
            prop_assert!((f - g).norm() <= 1e-14 * f.norm().max(1e-12));
        }

        #[test]
        fn additive_in_interval(p in 0.1..40.0f64, q in -40.0..40.0f64, a in -3.0..0.0f64, m in 0.1..1.0f64, n in 0.1..1.0f64) {
            let whole = fresnel_segment(p, q, a, a + m + n).unwrap();
            let parts = fresnel_segment(p, q, a, a + m).unwrap() + fresnel_segment(p, q, a + m, a + m + n).unwrap();
            prop_assert!((whole - parts).norm() <= 1e-11 * whole.norm().max(1e-6));
        }
    }
}
