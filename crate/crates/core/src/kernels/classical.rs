//! Single-crossing kernels `K₁` and the common prefactors.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SlitSubset;
use crate::error::Result;
use crate::experiment::ValidatedSetup;
use crate::quadrature::fresnel_segment;

/// Quadratic coefficient `k (1/2L + 1/2D)` of the far-field phase in the slit plane.
pub(crate) fn quadratic_coefficient(setup: &ValidatedSetup) -> f64 {
    let k = setup.wavenumber();
    k * (0.5 / setup.source_distance + 0.5 / setup.screen_distance)
}

/// The transverse integral `C_z = ∫_{-h}^{h} e^{ik z² (1/2L + 1/2D)} dz`.
///
/// Pass [`crate::experiment::INFINITE_HEIGHT`] for the full Fresnel limit `sqrt(iπ/p)`.
pub fn z_factor(setup: &ValidatedSetup, slit_height: f64) -> Result<Complex64> {
    let p = quadratic_coefficient(setup);
    if slit_height.is_infinite() {
        return Ok(Complex64::from_polar((PI / p).sqrt(), 0.25 * PI));
    }
    fresnel_segment(p, 0.0, -slit_height, slit_height)
}

/// `γ = e^{ik(L+D)} / (LD)`.
pub fn global_prefactor(setup: &ValidatedSetup) -> Complex64 {
    let l = setup.source_distance;
    let d = setup.screen_distance;
    Complex64::from_polar(1.0 / (l * d), setup.wavenumber() * (l + d))
}

/// Factor shared by every kernel of a setup: `γ` and `C_z` when their flags are on.
pub fn common_factor(setup: &ValidatedSetup) -> Result<Complex64> {
    let mut factor = Complex64::new(1.0, 0.0);
    if setup.include_global_prefactor {
        factor *= global_prefactor(setup);
    }
    if setup.include_z_factor {
        factor *= z_factor(setup, setup.geometry.height_half)?;
    }
    Ok(factor)
}

/// Reduced single-slit amplitude
/// `-(k/2π)² ∫_slit e^{ik[(y-y_S)²/2L + (y_D-y)²/2D]} dy`, without `γ` or `C_z`.
pub(crate) fn k1_slit_reduced(setup: &ValidatedSetup, slit: usize, y_d: f64) -> Result<Complex64> {
    let k = setup.wavenumber();
    let l = setup.source_distance;
    let d = setup.screen_distance;
    let y_s = setup.source_offset;
    let p = quadratic_coefficient(setup);
    let q = -k * (y_s / l + y_d / d);
    let constant = k * (y_s * y_s / (2.0 * l) + y_d * y_d / (2.0 * d));
    let (a, b) = setup.geometry.interval(slit);
    let integral = fresnel_segment(p, q, a, b)?;
    let norm = (k / (2.0 * PI)).powi(2);
    Ok(-norm * Complex64::from_polar(1.0, constant) * integral)
}

pub(crate) fn k1_reduced(setup: &ValidatedSetup, slits: &SlitSubset, y_d: f64) -> Result<Complex64> {
    slits
        .iter()
        .try_fold(Complex64::new(0.0, 0.0), |acc, i| Ok(acc + k1_slit_reduced(setup, i, y_d)?))
}

/// Classical amplitude through the open slits: the sum of the single-slit
/// Fresnel integrals, times the common factor selected by the setup flags.
pub fn k1(setup: &ValidatedSetup, slits: &SlitSubset, y_d: f64) -> Result<Complex64> {
    slits.check(setup.slit_count())?;
    Ok(common_factor(setup)? * k1_reduced(setup, slits, y_d)?)
}
