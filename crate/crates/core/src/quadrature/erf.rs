//! Error function of a complex argument.
//!
//! Two regimes cover the plane. For `Re(z)^2 < 3` the Maclaurin series is used:
//! its terms peak near `e^{|z|^2}` while the result is of size `e^{Im(z)^2 - Re(z)^2}`,
//! so the relative rounding error grows only like `e^{2 Re(z)^2}`. Elsewhere the
//! Laplace continued fraction for `erfc` is evaluated with the modified Lentz
//! algorithm; it converges quickly once `Re(z)` is bounded away from zero.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Largest `Im(z)^2 - Re(z)^2` for which `erf(z)` is representable.
const MAX_GROWTH_EXPONENT: f64 = 700.0;

const SERIES_RE_SQUARED: f64 = 3.0;
const SERIES_MAX_TERMS: usize = 20_000;
const CF_MAX_TERMS: usize = 20_000;

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("complex erf argument is not finite: {z}")))
    }
}

fn check_growth(z: Complex64) -> Result<()> {
    if z.im * z.im - z.re * z.re > MAX_GROWTH_EXPONENT {
        Err(Error::Overflow(z))
    } else {
        Ok(())
    }
}

fn erf_series(z: Complex64) -> Complex64 {
    // erf(z) = 2/sqrt(pi) * sum_n (-1)^n z^(2n+1) / (n! (2n+1))
    let minus_z2 = -z * z;
    let mut power = z;
    let mut sum = z;
    for n in 1..SERIES_MAX_TERMS {
        power *= minus_z2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * std::f64::consts::FRAC_2_SQRT_PI
}

/// Continued fraction `z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))`, so that
/// `erfc(z) = e^{-z^2} / (sqrt(pi) * K(z))` for `Re(z) > 0`.
fn laplace_fraction(z: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = z;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..CF_MAX_TERMS {
        let a = 0.5 * n as f64;
        d = z + d * a;
        if d.norm_sqr() == 0.0 {
            d = tiny;
        }
        c = z + c.inv() * a;
        if c.norm_sqr() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    f
}

fn use_fraction(z: Complex64) -> bool {
    z.re >= 0.0 && z.re * z.re >= SERIES_RE_SQUARED
}

/// `erf(z)` with relative accuracy near 1e-13 for `|z| <= 30` away from its zeros.
///
/// Returns [`Error::Overflow`] when the result exceeds the floating-point range.
pub fn complex_erf(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    check_growth(z)?;
    if z.re < 0.0 {
        return Ok(-complex_erf(-z)?);
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(z);
    }
    if use_fraction(z) {
        Ok(1.0 - erfc_fraction(z))
    } else {
        Ok(erf_series(z))
    }
}

fn erfc_fraction(z: Complex64) -> Complex64 {
    (-z * z).exp() / (SQRT_PI * laplace_fraction(z))
}

/// Complementary error function `erfc(z) = 1 - erf(z)`.
pub fn complex_erfc(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    check_growth(z)?;
    if z.re < 0.0 {
        return Ok(2.0 - complex_erfc(-z)?);
    }
    if use_fraction(z) {
        Ok(erfc_fraction(z))
    } else {
        Ok(1.0 - erf_series(z))
    }
}

/// Scaled complementary error function `e^{z^2} erfc(z)` for `Re(z) >= 0`.
///
/// On the continued-fraction branch the Gaussian factor is never formed, which
/// keeps the phase of `e^{z^2}` out of the result when `|z|` is large.
pub fn complex_erfcx(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    if z.re < 0.0 {
        return Err(Error::Domain(format!(
            "scaled erfc is only provided for Re(z) >= 0, got {z}"
        )));
    }
    if use_fraction(z) {
        return Ok((SQRT_PI * laplace_fraction(z)).inv());
    }
    check_growth(z)?;
    let z2 = z * z;
    if z2.re > MAX_GROWTH_EXPONENT {
        return Err(Error::Overflow(z));
    }
    Ok(z2.exp() * (1.0 - erf_series(z)))
}

/// Closed-form phase `e^{iπ/4}`.
pub(crate) fn eighth_turn() -> Complex64 {
    Complex64::from_polar(1.0, 0.25 * PI)
}
