//! Path-integral kernels: the classical single-crossing amplitude `K₁`, the
//! two-crossing (looped) amplitude `K₂`, its direct numerical oracle, and a
//! Huygens composition check of the free propagator.

mod classical;
mod direct;
mod huygens;
mod looped;
mod propagator;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ValidatedSetup;
use crate::quadrature::QuadratureSpec;

pub use classical::{common_factor, global_prefactor, k1, z_factor};
pub use direct::{k2_pair_direct, DIRECT_NODE_BUDGET};
pub use huygens::{huygens_compose, HuygensWindow, MIN_FRESNEL_ZONES};
pub use looped::{k2_pair, k2_pair_with, k2_subset};
pub use propagator::{free_propagator, Point3};

pub(crate) use classical::{k1_reduced, k1_slit_reduced};
pub(crate) use looped::k2_pair_reduced_many;

const MAX_SLITS: usize = 3;
const LABELS: [char; MAX_SLITS] = ['A', 'B', 'C'];

/// A non-empty set of open slits, indexed from the lowest slit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SlitSubset(u8);

impl SlitSubset {
    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u8;
        for &i in indices {
            if i >= MAX_SLITS {
                return Err(Error::Config(format!("slit index {i} out of range")));
            }
            if mask & (1 << i) != 0 {
                return Err(Error::Config(format!("slit index {i} repeated")));
            }
            mask |= 1 << i;
        }
        if mask == 0 {
            return Err(Error::Config("a slit subset must open at least one slit".into()));
        }
        Ok(SlitSubset(mask))
    }

    pub fn single(index: usize) -> Result<Self> {
        Self::new(&[index])
    }

    /// All `n` slits open.
    pub fn all(n: usize) -> Self {
        assert!((1..=MAX_SLITS).contains(&n), "slit count {n}");
        SlitSubset((1u8 << n) - 1)
    }

    /// Every non-empty subset of `n` slits, singles first.
    pub fn every(n: usize) -> Vec<SlitSubset> {
        let mut all: Vec<_> = (1..(1u8 << n)).map(SlitSubset).collect();
        all.sort_by_key(|s| (s.len(), s.0));
        all
    }

    pub fn contains(&self, index: usize) -> bool {
        index < MAX_SLITS && self.0 & (1 << index) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_SLITS).filter(|&i| self.contains(i))
    }

    /// Ordered pairs of distinct open slits.
    pub fn ordered_pairs(&self) -> Vec<OrderedSlitPair> {
        let mut pairs = Vec::new();
        for first in self.iter() {
            for second in self.iter() {
                if first != second {
                    pairs.push(OrderedSlitPair { first, second });
                }
            }
        }
        pairs
    }

    pub(crate) fn check(&self, slit_count: usize) -> Result<()> {
        match self.iter().find(|&i| i >= slit_count) {
            Some(i) => Err(Error::Config(format!(
                "slit {} is not part of a {slit_count}-slit setup",
                LABELS[i]
            ))),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<usize>> for SlitSubset {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        SlitSubset::new(&v)
    }
}

impl From<SlitSubset> for Vec<usize> {
    fn from(s: SlitSubset) -> Vec<usize> {
        s.iter().collect()
    }
}

impl fmt::Display for SlitSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.iter() {
            write!(f, "{}", LABELS[i])?;
        }
        Ok(())
    }
}

/// Two distinct slits crossed in order: first `first`, then `second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrderedSlitPair {
    pub first: usize,
    pub second: usize,
}

impl OrderedSlitPair {
    pub fn new(first: usize, second: usize) -> Result<Self> {
        if first >= MAX_SLITS || second >= MAX_SLITS {
            return Err(Error::Config(format!("slit pair ({first}, {second}) out of range")));
        }
        if first == second {
            return Err(Error::Config(format!(
                "a looped path must cross two different slits, got {} twice",
                LABELS[first]
            )));
        }
        Ok(OrderedSlitPair { first, second })
    }

    pub fn reversed(&self) -> Self {
        OrderedSlitPair {
            first: self.second,
            second: self.first,
        }
    }

    pub(crate) fn check(&self, slit_count: usize) -> Result<()> {
        SlitSubset::new(&[self.first, self.second])?.check(slit_count)
    }
}

impl fmt::Display for OrderedSlitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}", LABELS[self.first], LABELS[self.second])
    }
}

/// Total amplitude `K₁ + K₂` through `slits`; `K₂` is omitted when the setup
/// disables nonclassical paths.
pub fn k_total(setup: &ValidatedSetup, slits: &SlitSubset, y_d: f64) -> Result<Complex64> {
    slits.check(setup.slit_count())?;
    let mut total = k1_reduced(setup, slits, y_d)?;
    if setup.include_nonclassical {
        total += k2_subset_reduced(setup, slits, y_d, &QuadratureSpec::default())?;
    }
    Ok(common_factor(setup)? * total)
}

fn k2_subset_reduced(
    setup: &ValidatedSetup,
    slits: &SlitSubset,
    y_d: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for pair in slits.ordered_pairs() {
        sum += k2_pair_reduced_many(setup, pair, &[y_d], spec)?.remove(0)?;
    }
    Ok(sum)
}

/// All kernels of a setup at one detector position.
///
/// Values are stored without the factor shared by every kernel (`γ` and
/// `C_z` when enabled); that factor is kept once in `scale`. Any quantity
/// quadratic in the kernels then carries exactly `|scale|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBundle {
    pub y_detector: f64,
    pub scale: Complex64,
    pub slit_count: usize,
    /// `K₁` for every non-empty slit subset.
    pub k1: BTreeMap<SlitSubset, Complex64>,
    /// `K₂` for every ordered pair of distinct slits; zero when nonclassical
    /// paths are disabled.
    pub k2_pairs: BTreeMap<OrderedSlitPair, Complex64>,
}

impl KernelBundle {
    pub fn evaluate(setup: &ValidatedSetup, y_d: f64, spec: &QuadratureSpec) -> Result<Self> {
        Self::evaluate_many(setup, &[y_d], spec)?.remove(0)
    }

    /// Bundles for several detector positions. The outer error is about the
    /// setup; each inner result reports that point's own convergence.
    pub fn evaluate_many(
        setup: &ValidatedSetup,
        ys: &[f64],
        spec: &QuadratureSpec,
    ) -> Result<Vec<Result<Self>>> {
        spec.validate()?;
        let n = setup.slit_count();
        let scale = common_factor(setup)?;
        let all = SlitSubset::all(n);
        let pairs = all.ordered_pairs();
        let mut k2: Vec<Vec<Result<Complex64>>> = Vec::with_capacity(pairs.len());
        for &pair in &pairs {
            if setup.include_nonclassical {
                k2.push(k2_pair_reduced_many(setup, pair, ys, spec)?);
            } else {
                k2.push(ys.iter().map(|_| Ok(Complex64::new(0.0, 0.0))).collect());
            }
        }
        let mut columns: Vec<_> = k2.into_iter().map(|v| v.into_iter()).collect();
        let mut out = Vec::with_capacity(ys.len());
        for &y in ys {
            let row: Vec<Result<Complex64>> =
                columns.iter_mut().map(|c| c.next().expect("one value per point")).collect();
            let point = (|| {
                let singles: Vec<Complex64> =
                    (0..n).map(|i| k1_slit_reduced(setup, i, y)).collect::<Result<_>>()?;
                let k1 = SlitSubset::every(n)
                    .into_iter()
                    .map(|s| (s, s.iter().map(|i| singles[i]).sum()))
                    .collect();
                let mut k2_pairs = BTreeMap::new();
                for (p, value) in pairs.iter().zip(row) {
                    k2_pairs.insert(*p, value?);
                }
                Ok(KernelBundle {
                    y_detector: y,
                    scale,
                    slit_count: n,
                    k1,
                    k2_pairs,
                })
            })();
            out.push(point);
        }
        Ok(out)
    }

    /// `K₁` through `slits`, including the common factor.
    pub fn k1_value(&self, slits: &SlitSubset) -> Complex64 {
        self.scale * self.k1_reduced(slits)
    }

    /// `K₂` summed over ordered pairs inside `slits`, including the common factor.
    pub fn k2_value(&self, slits: &SlitSubset) -> Complex64 {
        self.scale * self.k2_reduced(slits)
    }

    pub fn k_total(&self, slits: &SlitSubset) -> Complex64 {
        self.scale * (self.k1_reduced(slits) + self.k2_reduced(slits))
    }

    pub(crate) fn k1_reduced(&self, slits: &SlitSubset) -> Complex64 {
        self.k1[slits]
    }

    pub(crate) fn k2_reduced(&self, slits: &SlitSubset) -> Complex64 {
        slits.ordered_pairs().iter().map(|p| self.k2_pairs[p]).sum()
    }

    pub(crate) fn k2_pair_reduced(&self, pair: OrderedSlitPair) -> Complex64 {
        self.k2_pairs[&pair]
    }

    /// Copy with every `K₂` multiplied by `factor`.
    pub fn with_scaled_nonclassical(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in out.k2_pairs.values_mut() {
            *v *= factor;
        }
        out
    }
}
