//! Physical configuration of a multi-slit experiment.
//!
//! All lengths are SI metres and the wavenumber is in rad/m. The slit plane is
//! `x = 0`, the source sits at `(-L, y_S, 0)` and the detector at `(D, y_D, 0)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationIssue};

/// Slit half-height that stands for "effectively infinite".
pub const INFINITE_HEIGHT: f64 = f64::INFINITY;

/// `d/L` above which the far-field phase expansion is reported as questionable.
pub const FRAUNHOFER_WARNING_RATIO: f64 = 1e-2;

/// Smallest accepted `k * min(L, D)`.
pub const MIN_WAVENUMBER_DISTANCE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    /// Slit centre y-coordinates on the slit plane, strictly increasing.
    pub centers: Vec<f64>,
    /// Slit width `w`.
    pub width: f64,
    /// Slit half-height `h`; [`INFINITE_HEIGHT`] for the infinite-slit limit.
    pub height_half: f64,
}

impl SlitGeometry {
    /// Triple slit with centres `{-d, 0, +d}`.
    pub fn triple(spacing: f64, width: f64) -> Self {
        SlitGeometry {
            centers: vec![-spacing, 0.0, spacing],
            width,
            height_half: INFINITE_HEIGHT,
        }
    }

    /// Double slit with centres `{-d/2, +d/2}`.
    pub fn double(spacing: f64, width: f64) -> Self {
        SlitGeometry {
            centers: vec![-0.5 * spacing, 0.5 * spacing],
            width,
            height_half: INFINITE_HEIGHT,
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Transverse interval `[c - w/2, c + w/2]` covered by slit `index`.
    pub fn interval(&self, index: usize) -> (f64, f64) {
        let c = self.centers[index];
        (c - 0.5 * self.width, c + 0.5 * self.width)
    }

    /// Largest transverse distance of any open aperture edge from the axis.
    pub fn extent(&self) -> f64 {
        self.centers
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs()))
            + 0.5 * self.width
    }

    pub fn has_finite_height(&self) -> bool {
        self.height_half.is_finite()
    }

    /// True when the centres are mirror images of each other about `y = 0`.
    pub fn is_mirror_symmetric(&self) -> bool {
        let n = self.centers.len();
        (0..n).all(|i| {
            let a = self.centers[i];
            let b = self.centers[n - 1 - i];
            (a + b).abs() <= 1e-12 * self.extent()
        })
    }

    /// Index of the slit that is the mirror image of `index`.
    pub fn mirror_index(&self, index: usize) -> usize {
        self.centers.len() - 1 - index
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Particle {
    Photon,
    Electron,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamParameters {
    /// `k = 2π/λ` in rad/m.
    pub wavenumber: f64,
    /// Informational only; the kernels depend on `k` alone.
    pub particle: Particle,
}

impl BeamParameters {
    pub fn from_wavelength(wavelength: f64, particle: Particle) -> Self {
        BeamParameters {
            wavenumber: 2.0 * PI / wavelength,
            particle,
        }
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.wavenumber
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSetup {
    pub geometry: SlitGeometry,
    pub beam: BeamParameters,
    /// Source to slit-plane distance `L`.
    pub source_distance: f64,
    /// Slit-plane to detector distance `D`.
    pub screen_distance: f64,
    /// Transverse source offset `y_S`.
    pub source_offset: f64,
    /// Multiply every two-crossing kernel by the Kirchhoff obliquity factor 1/4.
    pub apply_inclination_factor: bool,
    /// Multiply kernels by the common transverse integral `C_z`.
    pub include_z_factor: bool,
    /// Multiply kernels by `γ = e^{ik(L+D)}/(LD)`.
    pub include_global_prefactor: bool,
    /// Include the two-crossing (looped path) kernels at all.
    pub include_nonclassical: bool,
}

impl ExperimentSetup {
    pub fn new(geometry: SlitGeometry, beam: BeamParameters, source: f64, screen: f64) -> Self {
        ExperimentSetup {
            geometry,
            beam,
            source_distance: source,
            screen_distance: screen,
            source_offset: 0.0,
            apply_inclination_factor: true,
            include_z_factor: false,
            include_global_prefactor: false,
            include_nonclassical: true,
        }
    }
}

/// The named configurations shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// 810 nm photons, w = 30 µm, d = 100 µm, L = D = 18 cm.
    Photon,
    /// 50 pm electrons, w = 62 nm, d = 272 nm, L = 30.5 cm, D = 24 cm.
    Electron,
    /// 4 cm microwaves, w = 1.2 m, d = 4 m; L = D = 40 m is an assumption.
    Microwave,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Photon, Preset::Electron, Preset::Microwave];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Photon => "photon",
            Preset::Electron => "electron",
            Preset::Microwave => "microwave",
        }
    }

    pub fn setup(self) -> ExperimentSetup {
        match self {
            Preset::Photon => ExperimentSetup::new(
                SlitGeometry::triple(100e-6, 30e-6),
                BeamParameters::from_wavelength(810e-9, Particle::Photon),
                0.18,
                0.18,
            ),
            Preset::Electron => ExperimentSetup::new(
                SlitGeometry::triple(272e-9, 62e-9),
                BeamParameters::from_wavelength(50e-12, Particle::Electron),
                0.305,
                0.24,
            ),
            Preset::Microwave => ExperimentSetup::new(
                SlitGeometry::triple(4.0, 1.2),
                BeamParameters::from_wavelength(0.04, Particle::Photon),
                40.0,
                40.0,
            ),
        }
    }

    /// Values in the preset that are assumptions rather than published parameters.
    pub fn assumptions(self) -> &'static [&'static str] {
        match self {
            Preset::Microwave => &["source and screen distances L = D = 40 m are assumed (d/L = 0.1)"],
            _ => &[],
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "photon" => Ok(Preset::Photon),
            "electron" => Ok(Preset::Electron),
            "microwave" => Ok(Preset::Microwave),
            other => Err(Error::Config(format!(
                "unknown preset {other:?} (expected photon, electron or microwave)"
            ))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Look up a preset by name.
pub fn preset(name: &str) -> Result<ExperimentSetup> {
    Ok(name.parse::<Preset>()?.setup())
}

/// Dimensionless ratios reported by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest |slit centre| over `min(L, D)`.
    pub d_over_l: f64,
    pub wavelength_over_width: f64,
    pub wavelength_over_distance: f64,
}

/// An [`ExperimentSetup`] that passed [`validate`]. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedSetup {
    setup: ExperimentSetup,
    diagnostics: Diagnostics,
    warnings: Vec<String>,
}

impl ValidatedSetup {
    pub fn setup(&self) -> &ExperimentSetup {
        &self.setup
    }

    pub fn into_setup(self) -> ExperimentSetup {
        self.setup
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn geometry(&self) -> &SlitGeometry {
        &self.setup.geometry
    }

    pub fn wavenumber(&self) -> f64 {
        self.setup.beam.wavenumber
    }

    pub fn slit_count(&self) -> usize {
        self.setup.geometry.centers.len()
    }

    /// Re-validate a modified copy.
    pub fn with(&self, modify: impl FnOnce(&mut ExperimentSetup)) -> Result<ValidatedSetup> {
        let mut setup = self.setup.clone();
        modify(&mut setup);
        validate(setup)
    }

    pub fn with_wavenumber(&self, k: f64) -> Result<ValidatedSetup> {
        self.with(|s| s.beam.wavenumber = k)
    }
}

impl std::ops::Deref for ValidatedSetup {
    type Target = ExperimentSetup;

    fn deref(&self) -> &ExperimentSetup {
        &self.setup
    }
}

fn positive(value: f64, name: &str, issues: &mut Vec<ValidationIssue>) -> bool {
    if value.is_finite() && value > 0.0 {
        true
    } else {
        issues.push(ValidationIssue::Config(format!(
            "{name} must be positive and finite, got {value}"
        )));
        false
    }
}

/// Check every invariant of the setup, collecting all problems found.
pub fn validate(setup: ExperimentSetup) -> Result<ValidatedSetup> {
    let mut issues = Vec::new();
    let g = &setup.geometry;

    let width_ok = positive(g.width, "slit width", &mut issues);
    if !(g.height_half == INFINITE_HEIGHT || (g.height_half.is_finite() && g.height_half > 0.0)) {
        issues.push(ValidationIssue::Config(format!(
            "slit half-height must be positive or infinite, got {}",
            g.height_half
        )));
    }
    let k_ok = positive(setup.beam.wavenumber, "wavenumber", &mut issues);
    let l_ok = positive(setup.source_distance, "source distance L", &mut issues);
    let d_ok = positive(setup.screen_distance, "screen distance D", &mut issues);
    if !setup.source_offset.is_finite() {
        issues.push(ValidationIssue::Config("source offset must be finite".into()));
    }

    if !(2..=3).contains(&g.centers.len()) {
        issues.push(ValidationIssue::Geometry(format!(
            "expected 2 or 3 slits, got {}",
            g.centers.len()
        )));
    }
    if g.centers.iter().any(|c| !c.is_finite()) {
        issues.push(ValidationIssue::Geometry("slit centres must be finite".into()));
    } else {
        for pair in g.centers.windows(2) {
            let gap = pair[1] - pair[0];
            if gap <= 0.0 {
                issues.push(ValidationIssue::Geometry(format!(
                    "slit centres must be strictly increasing ({} then {})",
                    pair[0], pair[1]
                )));
            } else if width_ok && gap <= g.width {
                issues.push(ValidationIssue::Geometry(format!(
                    "slits at {} and {} overlap: spacing {gap} <= width {}",
                    pair[0], pair[1], g.width
                )));
            }
        }
    }

    let min_distance = setup.source_distance.min(setup.screen_distance);
    if k_ok && l_ok && d_ok && setup.beam.wavenumber * min_distance < MIN_WAVENUMBER_DISTANCE {
        issues.push(ValidationIssue::Config(format!(
            "wavelength is not small against L and D (k*min(L,D) = {:.3e})",
            setup.beam.wavenumber * min_distance
        )));
    }

    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }

    let max_center = g.centers.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let wavelength = setup.beam.wavelength();
    let diagnostics = Diagnostics {
        d_over_l: max_center / min_distance,
        wavelength_over_width: wavelength / g.width,
        wavelength_over_distance: wavelength / min_distance,
    };

    let mut warnings = Vec::new();
    if diagnostics.d_over_l > FRAUNHOFER_WARNING_RATIO {
        warnings.push(format!(
            "far-field expansion is marginal: d/L = {:.3e}",
            diagnostics.d_over_l
        ));
    }
    if g.extent() + setup.source_offset.abs() >= min_distance {
        warnings.push("apertures are not small against L and D".to_string());
    }

    Ok(ValidatedSetup {
        setup,
        diagnostics,
        warnings,
    })
}
