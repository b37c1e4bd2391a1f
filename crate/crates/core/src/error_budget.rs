//! Analytic estimates of the leading systematic errors on `κ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ValidatedSetup;

/// Optical properties of the opaque slit mask.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialDefaults {
    /// Imaginary part of the refractive index.
    pub attenuation: f64,
    /// Mask thickness in metres.
    pub thickness_m: f64,
}

impl Default for MaterialDefaults {
    /// Steel, refractive index `2.29 + 2.61i`, 1 µm thick.
    fn default() -> Self {
        MaterialDefaults {
            attenuation: 2.61,
            thickness_m: 1e-6,
        }
    }
}

impl MaterialDefaults {
    pub fn validate(&self) -> Result<()> {
        if !(self.attenuation > 0.0 && self.attenuation.is_finite()) {
            return Err(Error::Config(format!(
                "material attenuation must be positive, got {}",
                self.attenuation
            )));
        }
        if !(self.thickness_m >= 0.0 && self.thickness_m.is_finite()) {
            return Err(Error::Config(format!(
                "material thickness must be non-negative, got {}",
                self.thickness_m
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub metal_transmission_rel: f64,
    pub stationary_phase_rel: f64,
    pub fraunhofer_rel: f64,
    /// Largest of the three components.
    pub kappa_rel_leading: f64,
}

impl ErrorBudget {
    pub fn from_components(metal: f64, stationary: f64, fraunhofer: f64) -> Self {
        ErrorBudget {
            metal_transmission_rel: metal,
            stationary_phase_rel: stationary,
            fraunhofer_rel: fraunhofer,
            kappa_rel_leading: metal.max(stationary).max(fraunhofer),
        }
    }

    /// Name of the leading component.
    pub fn leading(&self) -> &'static str {
        if self.kappa_rel_leading == self.fraunhofer_rel {
            "fraunhofer"
        } else if self.kappa_rel_leading == self.stationary_phase_rel {
            "stationary_phase"
        } else {
            "metal_transmission"
        }
    }
}

/// Amplitude transmitted through a mask `ζ` wavelengths thick: `e^{-2παζ}`.
pub fn metal_transmission_error(attenuation: f64, thickness_wavelengths: f64) -> f64 {
    (-2.0 * PI * attenuation * thickness_wavelengths).exp()
}

/// Relative size of the first neglected stationary-phase term, `3/(Lk)`.
pub fn stationary_phase_error(setup: &ValidatedSetup) -> f64 {
    3.0 / (setup.source_distance * setup.wavenumber())
}

/// Far-field expansion error, `(max |c| + w/2) / min(L, D)`.
pub fn fraunhofer_error(setup: &ValidatedSetup) -> f64 {
    let reach = setup
        .geometry
        .centers
        .iter()
        .map(|c| c.abs())
        .fold(0.0, f64::max)
        + 0.5 * setup.geometry.width;
    reach / setup.source_distance.min(setup.screen_distance)
}

pub fn error_budget(setup: &ValidatedSetup, material: &MaterialDefaults) -> Result<ErrorBudget> {
    material.validate()?;
    let zeta = material.thickness_m / setup.beam.wavelength();
    Ok(ErrorBudget::from_components(
        metal_transmission_error(material.attenuation, zeta),
        stationary_phase_error(setup),
        fraunhofer_error(setup),
    ))
}
