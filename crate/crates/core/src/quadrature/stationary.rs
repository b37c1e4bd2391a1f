use std::f64::consts::PI;

use num_complex::Complex64;

use super::erf::eighth_turn;
use crate::error::{Error, Result};

/// Leading stationary-phase value of `∫ f(y) e^{ik g(y)} dy` about a
/// non-degenerate minimum `y0` of `g`:
///
/// `f(y0) e^{ik g(y0)} sqrt(2π / (k g''(y0))) e^{iπ/4}`.
///
/// The `2π` is the Gaussian-integral normalisation `∫ e^{i a t²/2} dt = sqrt(2π/a) e^{iπ/4}`,
/// which is what turns the `(k/2π)^3` four-fold looped-path integral into the
/// `i^{3/2} (k/2π)^{5/2}` three-fold one.
pub fn stationary_phase_1d(f0: Complex64, g0: f64, g2: f64, k: f64) -> Result<Complex64> {
    if !(g2 > 0.0 && g2.is_finite()) {
        return Err(Error::Domain(format!(
            "stationary point must be a non-degenerate minimum, g'' = {g2}"
        )));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {k}")));
    }
    let magnitude = (2.0 * PI / (k * g2)).sqrt();
    Ok(f0 * Complex64::from_polar(magnitude, k * g0) * eighth_turn())
}
