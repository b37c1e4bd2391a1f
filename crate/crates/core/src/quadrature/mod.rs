//! Complex oscillatory integrals: closed-form Fresnel segments, phase-adapted
//! composite Gauss-Legendre quadrature and the leading stationary-phase term.

mod erf;
mod fresnel;
pub(crate) mod mesh;
pub(crate) mod oscillatory;
mod stationary;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use erf::{complex_erf, complex_erfc, complex_erfcx};
pub use fresnel::fresnel_segment;
pub use mesh::{gauss_legendre, Mesh, PANEL_ORDER};
pub use oscillatory::{
    integrate_1d_detailed, integrate_2d_detailed, oscillatory_integrate_1d,
    oscillatory_integrate_2d, Converged, Rectangle,
};
pub use stationary::stationary_phase_1d;

/// A dimensionless complex kernel value.
pub type ComplexAmplitude = Complex64;

/// Controls every sampled oscillatory integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Nodes per `2π` of local phase on the initial mesh.
    pub points_per_cycle: f64,
    /// Accept when two successive mesh doublings differ by less than this, relatively.
    pub rel_tolerance: f64,
    /// Mesh doublings allowed before giving up.
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            points_per_cycle: 20.0,
            rel_tolerance: 1e-9,
            max_refinements: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.points_per_cycle >= 4.0 && self.points_per_cycle.is_finite()) {
            return Err(Error::Config(format!(
                "points_per_cycle must be >= 4, got {}",
                self.points_per_cycle
            )));
        }
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance.is_finite()) {
            return Err(Error::Config(format!(
                "rel_tolerance must be positive, got {}",
                self.rel_tolerance
            )));
        }
        if self.max_refinements < 1 {
            return Err(Error::Config("max_refinements must be at least 1".into()));
        }
        Ok(())
    }
}
