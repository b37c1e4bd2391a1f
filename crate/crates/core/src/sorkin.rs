//! Third-order interference: `ε`, its normalisations `δ`, and `κ = ε/δ`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{ExperimentSetup, ValidatedSetup};
use crate::kernels::{k1, k2_pair, KernelBundle, OrderedSlitPair, SlitSubset};
use crate::quadrature::QuadratureSpec;

/// `δ` below this fraction of its reference scale is treated as zero.
pub const DEGENERATE_DELTA: f64 = 1e-12;

/// Two-slit amplitude below this fraction of its central value is treated as zero.
const DEGENERATE_AMPLITUDE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `δ = |K^{ABC}(0)|²`, the triple-slit central maximum.
    #[default]
    CentralMax,
    /// `δ = |I_AB| + |I_BC| + |I_CA|` at the same detector position.
    InterferenceSum,
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "central_max" => Ok(Normalization::CentralMax),
            "interference_sum" => Ok(Normalization::InterferenceSum),
            other => Err(Error::Config(format!(
                "unknown normalization {other:?} (expected central-max or interference-sum)"
            ))),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::CentralMax => "central-max",
            Normalization::InterferenceSum => "interference-sum",
        })
    }
}

fn subset(indices: &[usize]) -> SlitSubset {
    SlitSubset::new(indices).expect("static subset")
}

fn pair(first: usize, second: usize) -> OrderedSlitPair {
    OrderedSlitPair::new(first, second).expect("static pair")
}

fn require_three(bundle: &KernelBundle) -> Result<()> {
    if bundle.slit_count == 3 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "the Sorkin parameter needs three slits, got {}; use two_slit_loop_deviation for two",
            bundle.slit_count
        )))
    }
}

/// Inclusion-exclusion signs of the seven subsets.
fn sign(slits: &SlitSubset) -> f64 {
    if slits.len() == 2 {
        -1.0
    } else {
        1.0
    }
}

impl KernelBundle {
    /// `|K^Ω|²` with all kernels of `Ω`, including the common factor.
    pub fn intensity(&self, slits: &SlitSubset) -> f64 {
        self.k_total(slits).norm_sqr()
    }

    /// `ε` from the seven intensities written out literally.
    ///
    /// The classical parts cancel, so this loses about `log10(|K₁/K₂|)`
    /// digits; [`KernelBundle::epsilon_full`] is the same quantity without the loss.
    pub fn epsilon_from_intensities(&self) -> Result<f64> {
        require_three(self)?;
        Ok(SlitSubset::every(3).iter().map(|s| sign(s) * self.intensity(s)).sum())
    }

    /// `ε` to all orders in `K₂`.
    ///
    /// Because `K₁` is additive over slits, `Σ_Ω s_Ω |K₁^Ω|² = 0` identically,
    /// and `ε = Σ_Ω s_Ω (2 Re(conj(K₁^Ω) K₂^Ω) + |K₂^Ω|²)`.
    pub fn epsilon_full(&self) -> Result<f64> {
        require_three(self)?;
        let sum: f64 = SlitSubset::every(3)
            .iter()
            .filter(|s| s.len() > 1)
            .map(|s| {
                let c = self.k1_reduced(s);
                let l = self.k2_reduced(s);
                sign(s) * (2.0 * (c.conj() * l).re + l.norm_sqr())
            })
            .sum();
        Ok(sum * self.scale.norm_sqr())
    }

    /// `ε` to first order in `K₂`:
    /// `2 Re{conj(K₁^C)(K₂^{AB}+K₂^{BA}) + conj(K₁^A)(K₂^{BC}+K₂^{CB}) + conj(K₁^B)(K₂^{AC}+K₂^{CA})}`.
    pub fn epsilon_linear(&self) -> Result<f64> {
        require_three(self)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for (alone, a, b) in [(2, 0, 1), (0, 1, 2), (1, 0, 2)] {
            let loops = self.k2_pair_reduced(pair(a, b)) + self.k2_pair_reduced(pair(b, a));
            sum += self.k1_reduced(&subset(&[alone])).conj() * loops;
        }
        Ok(2.0 * sum.re * self.scale.norm_sqr())
    }

    /// `|I_AB| + |I_BC| + |I_CA|` with `I_XY = |K^{XY}|² - |K^X|² - |K^Y|²`.
    pub fn interference_sum(&self) -> Result<f64> {
        require_three(self)?;
        Ok([(0, 1), (1, 2), (0, 2)]
            .iter()
            .map(|&(x, y)| {
                let i = self.intensity(&subset(&[x, y]))
                    - self.intensity(&subset(&[x]))
                    - self.intensity(&subset(&[y]));
                i.abs()
            })
            .sum())
    }

    /// `δ` in interference-sum mode, refusing a vanishing denominator.
    ///
    /// `scale` sets what counts as zero, normally the summed single-slit
    /// intensities at the central maximum.
    pub fn interference_delta(&self, scale: f64) -> Result<f64> {
        let delta = self.interference_sum()?;
        if !(delta > DEGENERATE_DELTA * scale) {
            return Err(Error::DegenerateNormalization(format!(
                "interference sum {delta:.3e} vanishes at y = {:.6e} m",
                self.y_detector
            )));
        }
        Ok(delta)
    }

    pub(crate) fn single_slit_scale(&self) -> f64 {
        (0..self.slit_count).map(|i| self.intensity(&subset(&[i]))).sum()
    }
}

fn check_finite(y: f64) -> Result<()> {
    if y.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("detector position {y} is not finite")))
    }
}

fn three_slit_bundle(setup: &ValidatedSetup, y_d: f64, spec: &QuadratureSpec) -> Result<KernelBundle> {
    check_finite(y_d)?;
    if setup.slit_count() != 3 {
        return Err(Error::Config(format!(
            "the Sorkin parameter needs three slits, got {}; use two_slit_loop_deviation for two",
            setup.slit_count()
        )));
    }
    KernelBundle::evaluate(setup, y_d, spec)
}

/// `ε` at one detector position, all orders in `K₂`.
pub fn epsilon_full(setup: &ValidatedSetup, y_d: f64) -> Result<f64> {
    three_slit_bundle(setup, y_d, &QuadratureSpec::default())?.epsilon_full()
}

/// `ε` at one detector position, first order in `K₂`.
pub fn epsilon_linear(setup: &ValidatedSetup, y_d: f64) -> Result<f64> {
    three_slit_bundle(setup, y_d, &QuadratureSpec::default())?.epsilon_linear()
}

/// True when the setup is mirror symmetric about `y = 0`, so the central
/// maximum sits at `y_D = 0`.
pub fn centred(setup: &ValidatedSetup) -> bool {
    setup.geometry.is_mirror_symmetric() && setup.source_offset == 0.0
}

/// The normaliser `δ`.
///
/// Central-max mode uses `|K^{ABC}(0)|²`, which is the maximum for mirror
/// symmetric setups; for other setups it takes the largest `|K^{ABC}|²`
/// over `y_hint` and `0`. Interference-sum mode needs `y_hint` to hold
/// exactly one position.
pub fn delta(setup: &ValidatedSetup, mode: Normalization, y_hint: &[f64]) -> Result<f64> {
    delta_with(setup, mode, y_hint, &QuadratureSpec::default())
}

pub fn delta_with(
    setup: &ValidatedSetup,
    mode: Normalization,
    y_hint: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    match mode {
        Normalization::CentralMax => Ok(central_intensity(setup, y_hint, spec)?.0),
        Normalization::InterferenceSum => {
            let &[y] = y_hint else {
                return Err(Error::Config(
                    "interference-sum normalization needs exactly one detector position".into(),
                ));
            };
            let centre = three_slit_bundle(setup, 0.0, spec)?;
            three_slit_bundle(setup, y, spec)?.interference_delta(centre.single_slit_scale())
        }
    }
}

/// `(|K^{ABC}|² at the central maximum, where it was taken)`.
fn central_intensity(setup: &ValidatedSetup, candidates: &[f64], spec: &QuadratureSpec) -> Result<(f64, DeltaSource)> {
    let all = SlitSubset::all(3);
    let at_zero = three_slit_bundle(setup, 0.0, spec)?.intensity(&all);
    let (value, source) = if centred(setup) {
        (at_zero, DeltaSource::Centre)
    } else {
        let mut best = (at_zero, 0.0);
        let bundles = KernelBundle::evaluate_many(setup, candidates, spec)?;
        for (b, &y) in bundles.iter().zip(candidates) {
            if let Ok(b) = b {
                let i = b.intensity(&all);
                if i > best.0 {
                    best = (i, y);
                }
            }
        }
        (best.0, DeltaSource::EmpiricalMaximum { y: best.1 })
    };
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::DegenerateNormalization(format!(
            "central intensity is {value:.3e}"
        )));
    }
    Ok((value, source))
}

/// `κ = ε/δ` at one detector position, with `ε` to all orders in `K₂`.
pub fn kappa(setup: &ValidatedSetup, y_d: f64, mode: Normalization) -> Result<f64> {
    kappa_with(setup, y_d, mode, &QuadratureSpec::default())
}

pub fn kappa_with(setup: &ValidatedSetup, y_d: f64, mode: Normalization, spec: &QuadratureSpec) -> Result<f64> {
    let bundle = three_slit_bundle(setup, y_d, spec)?;
    let eps = bundle.epsilon_full()?;
    let d = match mode {
        Normalization::CentralMax => central_intensity(setup, &[y_d], spec)?.0,
        Normalization::InterferenceSum => {
            let centre = three_slit_bundle(setup, 0.0, spec)?;
            bundle.interference_delta(centre.single_slit_scale())?
        }
    };
    Ok(eps / d)
}

/// Where the central-max normaliser was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaSource {
    /// `y_D = 0` of a mirror-symmetric setup.
    Centre,
    /// Largest `|K^{ABC}|²` found over the scan and `y_D = 0`.
    EmpiricalMaximum { y: f64 },
}

/// A scan point whose kernels did not converge or whose `δ` vanished.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub index: usize,
    pub y: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub setup: ExperimentSetup,
    pub normalization: Normalization,
    pub quadrature: QuadratureSpec,
    pub delta_source: DeltaSource,
    pub failures: Vec<PointFailure>,
    pub warnings: Vec<String>,
}

/// `κ(y)` over a detector scan. Invalid points hold NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SorkinScan {
    pub y_values: Vec<f64>,
    /// `|K^{ABC}(y)|²` over the central-maximum intensity.
    pub intensity_normalized: Vec<f64>,
    pub epsilon_full: Vec<f64>,
    pub epsilon_linear: Vec<f64>,
    /// Central-maximum intensity `|K^{ABC}|²`.
    pub delta: f64,
    /// Per-point `δ` in interference-sum mode.
    pub delta_per_point: Option<Vec<f64>>,
    pub kappa_full: Vec<f64>,
    pub kappa_linear: Vec<f64>,
    pub point_valid: Vec<bool>,
    pub metadata: ScanMetadata,
}

impl SorkinScan {
    pub fn len(&self) -> usize {
        self.y_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_values.is_empty()
    }
}

/// Evenly spaced detector positions, endpoints included.
pub fn linspace(y_min: f64, y_max: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| ((last - i as f64) * y_min + i as f64 * y_max) / last)
        .collect()
}

pub fn kappa_scan(
    setup: &ValidatedSetup,
    y_min: f64,
    y_max: f64,
    n_points: usize,
    mode: Normalization,
) -> Result<SorkinScan> {
    kappa_scan_with(setup, y_min, y_max, n_points, mode, &QuadratureSpec::default())
}

pub fn kappa_scan_with(
    setup: &ValidatedSetup,
    y_min: f64,
    y_max: f64,
    n_points: usize,
    mode: Normalization,
    spec: &QuadratureSpec,
) -> Result<SorkinScan> {
    if n_points < 2 {
        return Err(Error::Config(format!("a scan needs at least 2 points, got {n_points}")));
    }
    if !(y_min.is_finite() && y_max.is_finite() && y_min < y_max) {
        return Err(Error::Config(format!("scan range needs y_min < y_max, got [{y_min}, {y_max}]")));
    }
    scan_positions(setup, &linspace(y_min, y_max, n_points), mode, spec)
}

/// `κ` at arbitrary detector positions; a single position is allowed.
pub fn scan_positions(
    setup: &ValidatedSetup,
    ys: &[f64],
    mode: Normalization,
    spec: &QuadratureSpec,
) -> Result<SorkinScan> {
    spec.validate()?;
    ys.iter().try_for_each(|&y| check_finite(y))?;
    let centre = three_slit_bundle(setup, 0.0, spec)?;
    let (central, delta_source) = central_intensity(setup, ys, spec)?;
    let reference = centre.single_slit_scale();
    let bundles = KernelBundle::evaluate_many(setup, ys, spec)?;
    let all = SlitSubset::all(3);

    struct Point {
        intensity: f64,
        eps_full: f64,
        eps_linear: f64,
        delta: f64,
    }
    let points: Vec<Result<Point>> = bundles
        .into_par_iter()
        .map(|b| {
            let b = b?;
            let delta = match mode {
                Normalization::CentralMax => central,
                Normalization::InterferenceSum => b.interference_delta(reference)?,
            };
            Ok(Point {
                intensity: b.intensity(&all) / central,
                eps_full: b.epsilon_full()?,
                eps_linear: b.epsilon_linear()?,
                delta,
            })
        })
        .collect();

    let n = ys.len();
    let mut scan = SorkinScan {
        y_values: ys.to_vec(),
        intensity_normalized: Vec::with_capacity(n),
        epsilon_full: Vec::with_capacity(n),
        epsilon_linear: Vec::with_capacity(n),
        delta: central,
        delta_per_point: (mode == Normalization::InterferenceSum).then(|| Vec::with_capacity(n)),
        kappa_full: Vec::with_capacity(n),
        kappa_linear: Vec::with_capacity(n),
        point_valid: Vec::with_capacity(n),
        metadata: ScanMetadata {
            setup: setup.setup().clone(),
            normalization: mode,
            quadrature: *spec,
            delta_source,
            failures: Vec::new(),
            warnings: setup.warnings().to_vec(),
        },
    };
    for (index, (point, &y)) in points.into_iter().zip(ys).enumerate() {
        let (p, valid) = match point {
            Ok(p) => (p, true),
            Err(e) => {
                scan.metadata.failures.push(PointFailure {
                    index,
                    y,
                    message: e.to_string(),
                });
                let nan = f64::NAN;
                (
                    Point {
                        intensity: nan,
                        eps_full: nan,
                        eps_linear: nan,
                        delta: nan,
                    },
                    false,
                )
            }
        };
        scan.intensity_normalized.push(p.intensity);
        scan.epsilon_full.push(p.eps_full);
        scan.epsilon_linear.push(p.eps_linear);
        scan.kappa_full.push(p.eps_full / p.delta);
        scan.kappa_linear.push(p.eps_linear / p.delta);
        if let Some(d) = scan.delta_per_point.as_mut() {
            d.push(p.delta);
        }
        scan.point_valid.push(valid);
    }
    Ok(scan)
}

/// `|ψ_L| / |ψ_A + ψ_B|` for a two-slit setup, with
/// `ψ_L = K₂^{AB} + K₂^{BA}` and `ψ_A + ψ_B = K₁^{AB}`.
pub fn two_slit_loop_deviation(setup: &ValidatedSetup, y_d: f64) -> Result<f64> {
    check_finite(y_d)?;
    if setup.slit_count() != 2 {
        return Err(Error::Config(format!(
            "the loop deviation is defined for two slits, got {}; use kappa for three",
            setup.slit_count()
        )));
    }
    let both = subset(&[0, 1]);
    let classical = k1(setup, &both, y_d)?;
    let centre = k1(setup, &both, 0.0)?;
    if classical.norm() < DEGENERATE_AMPLITUDE * centre.norm() {
        return Err(Error::DegenerateNormalization(format!(
            "two-slit amplitude vanishes at y = {y_d:.6e} m"
        )));
    }
    if !setup.include_nonclassical {
        return Ok(0.0);
    }
    let looped = k2_pair(setup, pair(0, 1), y_d)? + k2_pair(setup, pair(1, 0), y_d)?;
    Ok(looped.norm() / classical.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{validate, Preset, SlitGeometry};

    fn photon() -> ValidatedSetup {
        validate(Preset::Photon.setup()).unwrap()
    }

    fn bundle(y: f64) -> KernelBundle {
        KernelBundle::evaluate(&photon(), y, &QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn stable_and_literal_forms_agree() {
        let b = bundle(2.1e-4);
        let stable = b.epsilon_full().unwrap();
        let literal = b.epsilon_from_intensities().unwrap();
        let scale = b.intensity(&SlitSubset::all(3));
        assert!((stable - literal).abs() < 1e-12 * scale);
    }

    #[test]
    fn classical_only_cancels() {
        let b = bundle(3e-4).with_scaled_nonclassical(0.0);
        assert_eq!(b.epsilon_full().unwrap(), 0.0);
        assert_eq!(b.epsilon_linear().unwrap(), 0.0);
        let scale = b.intensity(&SlitSubset::all(3));
        assert!(b.epsilon_from_intensities().unwrap().abs() < 1e-13 * scale);
    }

    #[test]
    fn quadratic_remainder_scales_as_square() {
        let b = bundle(1e-4);
        let diff = |s: f64| {
            let t = b.with_scaled_nonclassical(s);
            (t.epsilon_full().unwrap() - t.epsilon_linear().unwrap(), t.epsilon_linear().unwrap())
        };
        let (d1, l1) = diff(1.0);
        let (d2, l2) = diff(2.0);
        assert!((d2 / d1 - 4.0).abs() < 1e-8, "{}", d2 / d1);
        assert!((l2 / l1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_slit_setup_is_refused() {
        let two = photon().with(|s| s.geometry = SlitGeometry::double(1e-4, 3e-5)).unwrap();
        assert!(matches!(epsilon_full(&two, 0.0), Err(Error::Config(_))));
        assert!(two_slit_loop_deviation(&two, 0.0).is_ok());
        assert!(matches!(two_slit_loop_deviation(&photon(), 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn normalization_names() {
        assert_eq!("central-max".parse::<Normalization>().unwrap(), Normalization::CentralMax);
        assert_eq!("interference_sum".parse::<Normalization>().unwrap(), Normalization::InterferenceSum);
        assert!("peak".parse::<Normalization>().is_err());
        assert_eq!(Normalization::InterferenceSum.to_string(), "interference-sum");
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(-1.5e-3, 1.5e-3, 201);
        assert_eq!(v.len(), 201);
        assert_eq!(v[0], -1.5e-3);
        assert_eq!(v[200], 1.5e-3);
        assert_eq!(v[100], 0.0);
        assert_eq!(v[37], -v[163]);
    }

    #[test]
    fn scan_rejects_bad_ranges() {
        let s = photon();
        assert!(kappa_scan(&s, 0.0, 1.0, 1, Normalization::CentralMax).is_err());
        assert!(kappa_scan(&s, 1.0, 0.0, 5, Normalization::CentralMax).is_err());
    }
}
