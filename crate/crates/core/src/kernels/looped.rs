//! Two-crossing kernel `K₂` after the stationary-phase reduction of the
//! transverse coordinate at the second crossing:
//!
//! `K₂ = i^{3/2} (k/2π)^{5/2} ∫∫ |y₂-y₁|^{-1/2} e^{ik[(y₁-y_S)²/2L + |y₂-y₁| + (y_D-y₂)²/2D]} dy₁ dy₂`
//!
//! with `y₁` in the first slit and `y₂` in the second, times `1/4` when the
//! inclination factor is applied.
//!
//! Because the slits are disjoint, `|y₂-y₁| = s (y₂-y₁)` with a fixed sign `s`,
//! so the phase separates into a `y₁` part and a `(y₂, y_D)` part. The only
//! coupling is the smooth factor `|y₂-y₁|^{-1/2}`, which is replaced by a
//! Chebyshev interpolant in `y₂`. The `y₁` integral is then done once per
//! mesh, and each detector position costs one sum over the `y₂` nodes.
//!
//! Nodes are placed in coordinates local to each slit centre and the large
//! constant phases `k s (c₂-c₁)` and `k (y_D-c₂)²/2D` are applied once per
//! sum. Per-node phases then stay of order `k w`, which keeps rounding in
//! the node positions from being amplified by the cancellation of the
//! oscillatory sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{common_factor, OrderedSlitPair, SlitSubset};
use crate::error::{Error, Result};
use crate::experiment::ValidatedSetup;
use crate::quadrature::mesh::panels_for_rate;
use crate::quadrature::{Mesh, QuadratureSpec};

/// Largest interpolation degree tried before falling back to the direct sum.
const MAX_DEGREE: usize = 256;
const INTERPOLATION_TOLERANCE: f64 = 1e-14;

/// `i^{3/2} (k/2π)^{5/2}`, times `1/4` with the inclination factor.
pub(crate) fn k2_prefactor(setup: &ValidatedSetup) -> Complex64 {
    let k = setup.wavenumber();
    let pref = Complex64::from_polar((k / (2.0 * PI)).powf(2.5), 0.75 * PI);
    if setup.apply_inclination_factor {
        pref * 0.25
    } else {
        pref
    }
}

pub(crate) struct PairGeometry {
    k: f64,
    l: f64,
    d: f64,
    y_s: f64,
    pub(crate) first: (f64, f64),
    pub(crate) second: (f64, f64),
    sign: f64,
    centers: (f64, f64),
    half_widths: (f64, f64),
}

impl PairGeometry {
    pub(crate) fn new(setup: &ValidatedSetup, pair: OrderedSlitPair) -> Self {
        let first = setup.geometry.interval(pair.first);
        let second = setup.geometry.interval(pair.second);
        let c = &setup.geometry.centers;
        let h = 0.5 * setup.geometry.width;
        PairGeometry {
            k: setup.wavenumber(),
            l: setup.source_distance,
            d: setup.screen_distance,
            y_s: setup.source_offset,
            first,
            second,
            sign: if second.0 > first.0 { 1.0 } else { -1.0 },
            centers: (c[pair.first], c[pair.second]),
            half_widths: (h, h),
        }
    }

    /// Local meshes over the two slits, offsets from each slit centre.
    pub(crate) fn local_meshes(&self, panels_first: usize, panels_second: usize) -> (Mesh, Mesh) {
        let (h1, h2) = self.half_widths;
        (
            Mesh::composite(-h1, h1, panels_first),
            Mesh::composite(-h2, h2, panels_second),
        )
    }

    /// `y₁`-dependent phase at offset `t1`, without the constant `-k s c₁`.
    fn source_factor(&self, t1: f64) -> Complex64 {
        let u = (self.centers.0 - self.y_s) + t1;
        Complex64::from_polar(1.0, self.k * (u * u / (2.0 * self.l) - self.sign * t1))
    }

    /// `y₂`-dependent phase at offset `t2`, without [`Self::constant_phase`].
    fn screen_factor(&self, t2: f64, y_d: f64) -> Complex64 {
        let e = y_d - self.centers.1;
        Complex64::from_polar(1.0, self.k * (self.sign * t2 + t2 * (0.5 * t2 - e) / self.d))
    }

    fn constant_phase(&self, y_d: f64) -> Complex64 {
        let e = y_d - self.centers.1;
        let gap = self.sign * (self.centers.1 - self.centers.0);
        Complex64::from_polar(1.0, self.k * gap) * Complex64::from_polar(1.0, self.k * e * e / (2.0 * self.d))
    }

    /// `|y₂-y₁|` from the two local offsets.
    fn separation(&self, t1: f64, t2: f64) -> f64 {
        self.sign * (self.centers.1 - self.centers.0) + self.sign * (t2 - t1)
    }

    /// The unseparated integrand, phase formed in one piece.
    pub(crate) fn integrand(&self, y1: f64, y2: f64, y_d: f64) -> Complex64 {
        let u = y1 - self.y_s;
        let v = y_d - y2;
        let r = (y2 - y1).abs();
        let phase = self.k * (u * u / (2.0 * self.l) + r + v * v / (2.0 * self.d));
        Complex64::from_polar(r.powf(-0.5), phase)
    }

    pub(crate) fn rate_first(&self, y1: f64) -> f64 {
        self.k * ((y1 - self.y_s) / self.l - self.sign).abs()
    }

    pub(crate) fn rate_second(&self, y2: f64, y_d: f64) -> f64 {
        self.k * (self.sign - (y_d - y2) / self.d).abs()
    }

    fn base_panels(&self, y_range: (f64, f64), points_per_cycle: f64) -> (usize, usize) {
        let (a1, b1) = self.first;
        let (a2, b2) = self.second;
        let p1 = panels_for_rate(&|y| self.rate_first(y), a1, b1, points_per_cycle);
        let rate2 = |y: f64| self.rate_second(y, y_range.0).max(self.rate_second(y, y_range.1));
        let p2 = panels_for_rate(&rate2, a2, b2, points_per_cycle);
        (p1, p2)
    }

    /// Smallest Chebyshev degree reproducing `|y₂-y₁|^{-1/2}` over the second
    /// slit for the worst-placed `y₁` (the near edge of the first slit).
    fn interpolant(&self) -> Option<Chebyshev> {
        let near = self.sign * self.half_widths.0;
        let (a2, b2) = (-self.half_widths.1, self.half_widths.1);
        let exact = |y2: f64| self.separation(near, y2).powf(-0.5);
        let samples: Vec<f64> = (0..=300).map(|i| a2 + (b2 - a2) * (i as f64 + 0.37) / 301.0).collect();
        let mut degree = 8;
        while degree <= MAX_DEGREE {
            let cheb = Chebyshev::new(a2, b2, degree);
            let values: Vec<f64> = cheb.nodes.iter().map(|&x| exact(x)).collect();
            let mut basis = vec![0.0; cheb.nodes.len()];
            let worst = samples
                .iter()
                .map(|&x| {
                    cheb.basis(x, &mut basis);
                    let approx: f64 = basis.iter().zip(&values).map(|(b, v)| b * v).sum();
                    (approx / exact(x) - 1.0).abs()
                })
                .fold(0.0, f64::max);
            if worst <= INTERPOLATION_TOLERANCE {
                return Some(cheb);
            }
            degree *= 2;
        }
        None
    }
}

/// Barycentric interpolation on Chebyshev points of the second kind.
pub(crate) struct Chebyshev {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Chebyshev {
    pub(crate) fn new(a: f64, b: f64, degree: usize) -> Self {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let nodes = (0..=degree)
            .map(|m| mid + half * (PI * m as f64 / degree as f64).cos())
            .collect();
        let weights = (0..=degree)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                if m == 0 || m == degree {
                    0.5 * sign
                } else {
                    sign
                }
            })
            .collect();
        Chebyshev { nodes, weights }
    }

    /// Lagrange basis values at `x`.
    pub(crate) fn basis(&self, x: f64, out: &mut [f64]) {
        if let Some(hit) = self.nodes.iter().position(|&n| n == x) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[hit] = 1.0;
            return;
        }
        let mut total = 0.0;
        for ((o, &n), &w) in out.iter_mut().zip(&self.nodes).zip(&self.weights) {
            *o = w / (x - n);
            total += *o;
        }
        out.iter_mut().for_each(|v| *v /= total);
    }
}

/// The `y₁`-integrated looped amplitude on fixed meshes, ready for any `y_D`.
pub(crate) struct PairTransform {
    nodes: Vec<f64>,
    /// `w_j ∫ dy₁ e^{ik(...)} |y₂_j - y₁|^{-1/2}` per `y₂` node.
    coupled: Vec<Complex64>,
    /// Same with the phase dropped, for the rounding-noise floor.
    magnitude: Vec<f64>,
}

impl PairTransform {
    pub(crate) fn build(geom: &PairGeometry, cheb: Option<&Chebyshev>, m1: &Mesh, m2: &Mesh) -> Self {
        let weighted: Vec<Complex64> = m1.iter().map(|(y, w)| geom.source_factor(y) * w).collect();
        let (coupled, magnitude): (Vec<Complex64>, Vec<f64>) = match cheb {
            Some(cheb) => {
                let at_nodes: Vec<(Complex64, f64)> = cheb
                    .nodes
                    .par_iter()
                    .map(|&xi| {
                        let mut c = Complex64::new(0.0, 0.0);
                        let mut m = 0.0;
                        for ((y1, w), a) in m1.iter().zip(&weighted) {
                            let g = geom.separation(y1, xi).powf(-0.5);
                            c += a * g;
                            m += w * g;
                        }
                        (c, m)
                    })
                    .collect();
                m2.nodes
                    .par_iter()
                    .zip(&m2.weights)
                    .map_init(
                        || vec![0.0; cheb.nodes.len()],
                        |basis, (&y2, &w2)| {
                            cheb.basis(y2, basis);
                            let mut c = Complex64::new(0.0, 0.0);
                            let mut m = 0.0;
                            for (b, (cn, mn)) in basis.iter().zip(&at_nodes) {
                                c += cn * b;
                                m += mn * b;
                            }
                            (c * w2, m * w2)
                        },
                    )
                    .unzip()
            }
            None => m2
                .nodes
                .par_iter()
                .zip(&m2.weights)
                .map(|(&y2, &w2)| {
                    let mut c = Complex64::new(0.0, 0.0);
                    let mut m = 0.0;
                    for ((y1, w), a) in m1.iter().zip(&weighted) {
                        let g = geom.separation(y1, y2).powf(-0.5);
                        c += a * g;
                        m += w * g;
                    }
                    (c * w2, m * w2)
                })
                .unzip(),
        };
        PairTransform {
            nodes: m2.nodes.clone(),
            coupled,
            magnitude,
        }
    }

    /// Integral and `sum |w f|` at one detector position.
    pub(crate) fn eval(&self, geom: &PairGeometry, y_d: f64) -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        for (&t2, c) in self.nodes.iter().zip(&self.coupled) {
            sum += c * geom.screen_factor(t2, y_d);
        }
        (sum * geom.constant_phase(y_d), self.magnitude.iter().sum())
    }
}

/// Reduced `K₂` (no `γ`, no `C_z`) for one ordered pair at several detector
/// positions, refining the mesh until every position has converged or the
/// refinement budget is spent.
pub(crate) fn k2_pair_reduced_many(
    setup: &ValidatedSetup,
    pair: OrderedSlitPair,
    ys: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<Result<Complex64>>> {
    pair.check(setup.slit_count())?;
    spec.validate()?;
    if let Some(y) = ys.iter().find(|y| !y.is_finite()) {
        return Err(Error::Domain(format!("detector position {y} is not finite")));
    }
    if ys.is_empty() {
        return Ok(Vec::new());
    }
    let geom = PairGeometry::new(setup, pair);
    let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (p1, p2) = geom.base_panels((lo, hi), spec.points_per_cycle);
    let cheb = geom.interpolant();
    let pref = k2_prefactor(setup);

    let mut results: Vec<Option<Result<Complex64>>> = ys.iter().map(|_| None).collect();
    let mut previous: Option<Vec<(Complex64, f64)>> = None;
    for level in 0..=spec.max_refinements {
        let scale = 1usize << level;
        let (m1, m2) = geom.local_meshes(p1 * scale, p2 * scale);
        let transform = PairTransform::build(&geom, cheb.as_ref(), &m1, &m2);
        let values: Vec<(Complex64, f64)> = ys.par_iter().map(|&y| transform.eval(&geom, y)).collect();
        if let Some(prev) = &previous {
            for (i, slot) in results.iter_mut().enumerate() {
                if slot.is_some() {
                    continue;
                }
                let (last, l1) = values[i];
                if !(last.re.is_finite() && last.im.is_finite()) {
                    *slot = Some(Err(Error::Domain(format!("looped kernel is not finite: {last}"))));
                } else if crate::quadrature::oscillatory::accepted(prev[i].0, last, l1, spec.rel_tolerance) {
                    *slot = Some(Ok(pref * last));
                } else if level == spec.max_refinements {
                    *slot = Some(Err(Error::Convergence {
                        refinements: level,
                        previous: pref * prev[i].0,
                        last: pref * last,
                    }));
                }
            }
            if results.iter().all(Option::is_some) {
                break;
            }
        }
        previous = Some(values);
    }
    Ok(results.into_iter().map(|r| r.expect("every point resolved")).collect())
}

/// Two-crossing amplitude for one ordered slit pair at the default quadrature settings.
pub fn k2_pair(setup: &ValidatedSetup, pair: OrderedSlitPair, y_d: f64) -> Result<Complex64> {
    k2_pair_with(setup, pair, y_d, &QuadratureSpec::default())
}

pub fn k2_pair_with(
    setup: &ValidatedSetup,
    pair: OrderedSlitPair,
    y_d: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let value = k2_pair_reduced_many(setup, pair, &[y_d], spec)?.remove(0)?;
    Ok(common_factor(setup)? * value)
}

/// Sum of `K₂` over every ordered pair of distinct open slits.
pub fn k2_subset(setup: &ValidatedSetup, slits: &SlitSubset, y_d: f64) -> Result<Complex64> {
    slits.check(setup.slit_count())?;
    let mut sum = Complex64::new(0.0, 0.0);
    for pair in slits.ordered_pairs() {
        sum += k2_pair(setup, pair, y_d)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{validate, Preset};
    use crate::kernels::k1;
    use crate::quadrature::{oscillatory_integrate_2d, Rectangle};

    fn photon() -> ValidatedSetup {
        validate(Preset::Photon.setup()).unwrap()
    }

    fn pair(a: usize, b: usize) -> OrderedSlitPair {
        OrderedSlitPair::new(a, b).unwrap()
    }

    #[test]
    fn chebyshev_basis_is_partition_of_unity() {
        let c = Chebyshev::new(-1.0, 3.0, 16);
        let mut b = vec![0.0; 17];
        for x in [-1.0, -0.3, 0.77, 2.9999] {
            c.basis(x, &mut b);
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
        c.basis(3.0, &mut b);
        assert_eq!(b[0], 1.0);
    }

    #[test]
    fn transform_matches_brute_double_sum() {
        let s = photon();
        for p in [pair(0, 1), pair(2, 0)] {
            let geom = PairGeometry::new(&s, p);
            let (m1, m2) = geom.local_meshes(40, 40);
            let cheb = geom.interpolant();
            assert!(cheb.is_some());
            let t = PairTransform::build(&geom, cheb.as_ref(), &m1, &m2);
            for y_d in [0.0, 4e-4] {
                let mut brute = Complex64::new(0.0, 0.0);
                let mut mass = 0.0;
                for (y1, w1) in m1.iter() {
                    for (y2, w2) in m2.iter() {
                        let (y1, y2) = (geom.centers.0 + y1, geom.centers.1 + y2);
                        let f = geom.integrand(y1, y2, y_d) * (w1 * w2);
                        brute += f;
                        mass += f.norm();
                    }
                }
                let (fast, fast_mass) = t.eval(&geom, y_d);
                // The double sum cancels by ~1e6, so compare on the scale of sum |w f|.
                assert!((fast - brute).norm() < 1e-14 * mass, "{p} at {y_d}: {fast} vs {brute}");
                assert!((fast_mass / mass - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn agrees_with_generic_two_dimensional_quadrature() {
        let s = photon();
        let spec = QuadratureSpec {
            rel_tolerance: 1e-11,
            ..QuadratureSpec::default()
        };
        for (p, y_d) in [(pair(0, 1), 0.0), (pair(1, 2), -3e-4)] {
            let geom = PairGeometry::new(&s, p);
            let generic = oscillatory_integrate_2d(
                |y1, y2| geom.integrand(y1, y2, y_d),
                (|y1| geom.rate_first(y1), |y2| geom.rate_second(y2, y_d)),
                Rectangle::new(geom.first, geom.second).with_singular_diagonal(),
                &spec,
            )
            .unwrap()
                * k2_prefactor(&s);
            let fast = k2_pair_with(&s, p, y_d, &spec).unwrap();
            assert!((fast - generic).norm() < 1e-9 * generic.norm(), "{fast} vs {generic}");
        }
    }

    #[test]
    fn outer_slit_pair_is_reversible_on_axis() {
        for preset in [Preset::Photon, Preset::Microwave] {
            let s = validate(preset.setup()).unwrap();
            let ac = k2_pair(&s, pair(0, 2), 0.0).unwrap();
            let ca = k2_pair(&s, pair(2, 0), 0.0).unwrap();
            assert!((ac - ca).norm() < 1e-10 * ac.norm(), "{preset}: {ac} vs {ca}");
        }
    }

    #[test]
    fn small_next_to_classical() {
        let s = photon();
        let ratio = k2_pair(&s, pair(0, 1), 0.0).unwrap().norm()
            / k1(&s, &SlitSubset::single(0).unwrap(), 0.0).unwrap().norm();
        assert!(ratio > 1e-7 && ratio < 1e-5, "ratio {ratio}");
    }

    #[test]
    fn inclination_factor_is_a_quarter() {
        let s = photon();
        let without = s.with(|e| e.apply_inclination_factor = false).unwrap();
        let a = k2_pair(&s, pair(1, 0), 1e-4).unwrap();
        let b = k2_pair(&without, pair(1, 0), 1e-4).unwrap();
        assert!((b - 4.0 * a).norm() < 1e-15 * b.norm());
    }

    #[test]
    fn pair_outside_two_slit_setup() {
        let s = validate(Preset::Photon.setup()).unwrap();
        let two = s
            .with(|e| e.geometry = crate::experiment::SlitGeometry::double(1e-4, 3e-5))
            .unwrap();
        assert!(matches!(k2_pair(&two, pair(0, 2), 0.0), Err(Error::Config(_))));
        assert!(k2_pair(&two, pair(1, 0), 0.0).is_ok());
    }

    #[test]
    fn many_positions_match_single_evaluations() {
        let s = photon();
        let ys = [-2e-4, 0.0, 1.5e-4];
        let spec = QuadratureSpec::default();
        let many = k2_pair_reduced_many(&s, pair(2, 1), &ys, &spec).unwrap();
        for (y, v) in ys.iter().zip(many) {
            let single = k2_pair_with(&s, pair(2, 1), *y, &spec).unwrap();
            assert!((v.unwrap() - single).norm() < 1e-9 * single.norm());
        }
    }
}
