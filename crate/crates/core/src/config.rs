//! TOML run configuration.
//!
//! ```toml
//! wavelength_m = 810e-9          # or wavenumber_per_m
//! slit_spacing_m = 100e-6        # or slit_centers_m = [...]
//! slit_width_m = 30e-6
//! slit_half_height_m = "inf"
//! source_distance_m = 0.18
//! screen_distance_m = 0.18
//!
//! [scan]
//! y_min_m = -1.5e-3
//! y_max_m = 1.5e-3
//! n_points = 201
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::error_budget::MaterialDefaults;
use crate::experiment::{BeamParameters, ExperimentSetup, Particle, SlitGeometry, INFINITE_HEIGHT};
use crate::quadrature::QuadratureSpec;
use crate::sorkin::Normalization;

/// Detector positions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanRequest {
    Range { y_min: f64, y_max: f64, n_points: usize },
    Point(f64),
}

impl ScanRequest {
    pub fn positions(&self) -> Vec<f64> {
        match *self {
            ScanRequest::Range { y_min, y_max, n_points } => crate::sorkin::linspace(y_min, y_max, n_points),
            ScanRequest::Point(y) => vec![y],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ScanRequest::Range { y_min, y_max, n_points } => {
                if n_points < 2 {
                    return Err(Error::Config(format!("a scan needs at least 2 points, got {n_points}")));
                }
                if !(y_min.is_finite() && y_max.is_finite() && y_min < y_max) {
                    return Err(Error::Config(format!("scan range needs y_min < y_max, got [{y_min}, {y_max}]")));
                }
            }
            ScanRequest::Point(y) => {
                if !y.is_finite() {
                    return Err(Error::Config(format!("detector position {y} is not finite")));
                }
            }
        }
        Ok(())
    }
}

/// Everything a run needs, after defaults are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub setup: ExperimentSetup,
    pub material: MaterialDefaults,
    pub quadrature: QuadratureSpec,
    pub normalization: Normalization,
    pub scan: Option<ScanRequest>,
}

impl RunConfig {
    pub fn new(setup: ExperimentSetup) -> Self {
        RunConfig {
            setup,
            material: MaterialDefaults::default(),
            quadrature: QuadratureSpec::default(),
            normalization: Normalization::default(),
            scan: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Height {
    Number(f64),
    Word(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanTable {
    y_min_m: Option<f64>,
    y_max_m: Option<f64>,
    n_points: Option<usize>,
    point_m: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialTable {
    attenuation: Option<f64>,
    thickness_m: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadratureTable {
    points_per_cycle: Option<f64>,
    rel_tolerance: Option<f64>,
    max_refinements: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    wavelength_m: Option<f64>,
    wavenumber_per_m: Option<f64>,
    particle: Option<Particle>,
    slit_centers_m: Option<Vec<f64>>,
    slit_spacing_m: Option<f64>,
    slit_count: Option<usize>,
    slit_width_m: f64,
    slit_half_height_m: Option<Height>,
    source_distance_m: f64,
    screen_distance_m: f64,
    source_offset_m: Option<f64>,
    apply_inclination_factor: Option<bool>,
    include_z_factor: Option<bool>,
    include_global_prefactor: Option<bool>,
    include_nonclassical: Option<bool>,
    normalization: Option<String>,
    material: Option<MaterialTable>,
    scan: Option<ScanTable>,
    quadrature: Option<QuadratureTable>,
    // Written into result sidecars; ignored on input.
    #[allow(dead_code)]
    error_budget: Option<toml::Value>,
    #[allow(dead_code)]
    provenance: Option<toml::Value>,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    resolve(raw)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn resolve(raw: RawConfig) -> Result<RunConfig> {
    let wavenumber = match (raw.wavelength_m, raw.wavenumber_per_m) {
        (Some(l), None) => 2.0 * PI / l,
        (None, Some(k)) => k,
        (Some(_), Some(_)) => {
            return Err(Error::Config("give wavelength_m or wavenumber_per_m, not both".into()))
        }
        (None, None) => return Err(Error::Config("missing wavelength_m or wavenumber_per_m".into())),
    };
    let centers = match (raw.slit_centers_m, raw.slit_spacing_m) {
        (Some(c), None) => {
            if raw.slit_count.is_some_and(|n| n != c.len()) {
                return Err(Error::Config("slit_count disagrees with slit_centers_m".into()));
            }
            c
        }
        (None, Some(d)) => match raw.slit_count.unwrap_or(3) {
            3 => SlitGeometry::triple(d, raw.slit_width_m).centers,
            2 => SlitGeometry::double(d, raw.slit_width_m).centers,
            n => return Err(Error::Config(format!("slit_count must be 2 or 3, got {n}"))),
        },
        (Some(_), Some(_)) => {
            return Err(Error::Config("give slit_centers_m or slit_spacing_m, not both".into()))
        }
        (None, None) => return Err(Error::Config("missing slit_centers_m or slit_spacing_m".into())),
    };
    let height_half = match raw.slit_half_height_m {
        None => INFINITE_HEIGHT,
        Some(Height::Number(h)) => h,
        Some(Height::Word(w)) if matches!(w.trim().to_ascii_lowercase().as_str(), "inf" | "infinite") => {
            INFINITE_HEIGHT
        }
        Some(Height::Word(w)) => return Err(Error::Config(format!("slit_half_height_m: unexpected {w:?}"))),
    };

    let mut setup = ExperimentSetup::new(
        SlitGeometry {
            centers,
            width: raw.slit_width_m,
            height_half,
        },
        BeamParameters {
            wavenumber,
            particle: raw.particle.unwrap_or(Particle::Other),
        },
        raw.source_distance_m,
        raw.screen_distance_m,
    );
    setup.source_offset = raw.source_offset_m.unwrap_or(0.0);
    if let Some(v) = raw.apply_inclination_factor {
        setup.apply_inclination_factor = v;
    }
    if let Some(v) = raw.include_z_factor {
        setup.include_z_factor = v;
    }
    if let Some(v) = raw.include_global_prefactor {
        setup.include_global_prefactor = v;
    }
    if let Some(v) = raw.include_nonclassical {
        setup.include_nonclassical = v;
    }

    let mut config = RunConfig::new(setup);
    if let Some(n) = raw.normalization {
        config.normalization = n.parse()?;
    }
    if let Some(m) = raw.material {
        if let Some(a) = m.attenuation {
            config.material.attenuation = a;
        }
        if let Some(t) = m.thickness_m {
            config.material.thickness_m = t;
        }
        config.material.validate()?;
    }
    if let Some(q) = raw.quadrature {
        if let Some(v) = q.points_per_cycle {
            config.quadrature.points_per_cycle = v;
        }
        if let Some(v) = q.rel_tolerance {
            config.quadrature.rel_tolerance = v;
        }
        if let Some(v) = q.max_refinements {
            config.quadrature.max_refinements = v;
        }
        config.quadrature.validate()?;
    }
    if let Some(s) = raw.scan {
        let scan = match (s.y_min_m, s.y_max_m, s.n_points, s.point_m) {
            (Some(y_min), Some(y_max), Some(n_points), None) => ScanRequest::Range { y_min, y_max, n_points },
            (None, None, None, Some(y)) => ScanRequest::Point(y),
            _ => {
                return Err(Error::Config(
                    "[scan] needs y_min_m, y_max_m and n_points, or point_m alone".into(),
                ))
            }
        };
        scan.validate()?;
        config.scan = Some(scan);
    }
    Ok(config)
}

#[derive(Serialize)]
struct ResolvedScan {
    #[serde(skip_serializing_if = "Option::is_none")]
    y_min_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y_max_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point_m: Option<f64>,
}

#[derive(Serialize)]
struct Resolved<'a, E: Serialize, P: Serialize> {
    wavenumber_per_m: f64,
    particle: Particle,
    slit_centers_m: &'a [f64],
    slit_width_m: f64,
    slit_half_height_m: f64,
    source_distance_m: f64,
    screen_distance_m: f64,
    source_offset_m: f64,
    apply_inclination_factor: bool,
    include_z_factor: bool,
    include_global_prefactor: bool,
    include_nonclassical: bool,
    normalization: String,
    material: MaterialDefaults,
    quadrature: QuadratureSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    scan: Option<ResolvedScan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_budget: Option<E>,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<P>,
}

/// The configuration as TOML that [`parse_config`] reads back to an equal
/// [`RunConfig`]. `error_budget` and `provenance` are written as extra
/// tables that are ignored on input.
pub fn to_toml<E: Serialize, P: Serialize>(
    config: &RunConfig,
    error_budget: Option<&E>,
    provenance: Option<&P>,
) -> Result<String> {
    let s = &config.setup;
    let scan = config.scan.map(|scan| match scan {
        ScanRequest::Range { y_min, y_max, n_points } => ResolvedScan {
            y_min_m: Some(y_min),
            y_max_m: Some(y_max),
            n_points: Some(n_points),
            point_m: None,
        },
        ScanRequest::Point(y) => ResolvedScan {
            y_min_m: None,
            y_max_m: None,
            n_points: None,
            point_m: Some(y),
        },
    });
    let resolved = Resolved {
        wavenumber_per_m: s.beam.wavenumber,
        particle: s.beam.particle,
        slit_centers_m: &s.geometry.centers,
        slit_width_m: s.geometry.width,
        slit_half_height_m: s.geometry.height_half,
        source_distance_m: s.source_distance,
        screen_distance_m: s.screen_distance,
        source_offset_m: s.source_offset,
        apply_inclination_factor: s.apply_inclination_factor,
        include_z_factor: s.include_z_factor,
        include_global_prefactor: s.include_global_prefactor,
        include_nonclassical: s.include_nonclassical,
        normalization: config.normalization.to_string(),
        material: config.material,
        quadrature: config.quadrature,
        scan,
        error_budget,
        provenance,
    };
    toml::to_string(&resolved).map_err(|e| Error::Config(format!("cannot serialise configuration: {e}")))
}
