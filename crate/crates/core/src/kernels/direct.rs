//! Direct evaluation of the looped kernel with the transverse integral at the
//! second crossing done numerically instead of by stationary phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::looped::PairGeometry;
use super::{common_factor, OrderedSlitPair};
use crate::error::{Error, Result};
use crate::experiment::ValidatedSetup;
use crate::quadrature::mesh::panels_for_rate;
use crate::quadrature::{integrate_1d_detailed, oscillatory_integrate_2d, QuadratureSpec, Rectangle, PANEL_ORDER};

/// Largest estimated integrand-evaluation count accepted.
pub const DIRECT_NODE_BUDGET: f64 = 1e8;

/// Rotated-contour half-width in units of the Gaussian scale `sqrt(2a/k)`.
const CONTOUR_HALF_WIDTH: f64 = 7.0;

/// Smallest `k · gap` between the slits for which the contour window is safe.
const MIN_SEPARATION_PHASE: f64 = 50.0;

/// `∫ e^{ik(ρ - a)} / ρ dz` over the whole line, `ρ = sqrt(a² + z²)`.
///
/// The contour is rotated to `z = x e^{iπ/4}`, on which the integrand is a
/// decaying Gaussian of width `sqrt(2a/k)` and no longer oscillates.
fn transverse(a: f64, k: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let sigma = (2.0 * a / k).sqrt();
    let ka = k * a;
    let value = integrate_1d_detailed(
        |t| {
            let tau = Complex64::new(0.0, 2.0 * t * t / ka);
            let root = (1.0 + tau).sqrt();
            // sqrt(1 + iτ) - 1 without cancellation
            let excess = tau / (root + 1.0);
            (Complex64::i() * ka * excess).exp() / (a * root)
        },
        |_| 2.0,
        (0.0, CONTOUR_HALF_WIDTH),
        spec,
    )?
    .value;
    Ok(Complex64::from_polar(2.0 * sigma, 0.25 * PI) * value)
}

/// Looped kernel with `(k/2πi)³` and the second-crossing `z` integral done numerically.
///
/// `k_override` evaluates at another wavenumber with the same geometry. The
/// result differs from [`super::k2_pair`] by a relative amount of order
/// `1/(k · slit separation)`.
pub fn k2_pair_direct(
    setup: &ValidatedSetup,
    pair: OrderedSlitPair,
    y_d: f64,
    k_override: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let setup = match k_override {
        Some(k) => setup.with_wavenumber(k)?,
        None => setup.clone(),
    };
    pair.check(setup.slit_count())?;
    spec.validate()?;
    let k = setup.wavenumber();
    let geom = PairGeometry::new(&setup, pair);
    let gap = (geom.second.0 - geom.first.1).max(geom.first.0 - geom.second.1);
    if k * gap < MIN_SEPARATION_PHASE {
        return Err(Error::Domain(format!(
            "slits too close for the direct kernel: k * gap = {:.3}",
            k * gap
        )));
    }
    let n1 = PANEL_ORDER * panels_for_rate(&|y| geom.rate_first(y), geom.first.0, geom.first.1, spec.points_per_cycle);
    let n2 = PANEL_ORDER
        * panels_for_rate(&|y| geom.rate_second(y, y_d), geom.second.0, geom.second.1, spec.points_per_cycle);
    let nz = PANEL_ORDER * panels_for_rate(&|_| 2.0, 0.0, CONTOUR_HALF_WIDTH, spec.points_per_cycle);
    let estimated = (n1 * n2 * nz) as f64;
    if estimated > DIRECT_NODE_BUDGET {
        return Err(Error::Budget {
            estimated,
            budget: DIRECT_NODE_BUDGET,
        });
    }

    let failure = std::cell::RefCell::new(None);
    let integral = oscillatory_integrate_2d(
        |y1, y2| {
            let a = (y2 - y1).abs();
            match transverse(a, k, spec) {
                Ok(h) => geom.integrand(y1, y2, y_d) * a.sqrt() * h,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        (|y1| geom.rate_first(y1), |y2| geom.rate_second(y2, y_d)),
        Rectangle::new(geom.first, geom.second).with_singular_diagonal(),
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let mut pref = Complex64::new(0.0, (k / (2.0 * PI)).powi(3));
    if setup.apply_inclination_factor {
        pref *= 0.25;
    }
    Ok(common_factor(&setup)? * pref * integral?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{validate, Preset};
    use crate::quadrature::stationary_phase_1d;

    #[test]
    fn transverse_integral_tends_to_stationary_phase() {
        let spec = QuadratureSpec::default();
        let k = 1e3;
        let mut last_error = f64::INFINITY;
        for a in [0.1, 0.4, 1.6] {
            let numeric = transverse(a, k, &spec).unwrap();
            let sp = stationary_phase_1d(Complex64::new(1.0 / a, 0.0), 0.0, 1.0 / a, k).unwrap();
            let err = (numeric - sp).norm() / sp.norm();
            assert!(err < 1.0 / (k * a), "a = {a}: {err}");
            assert!(err < last_error);
            last_error = err;
        }
    }

    #[test]
    fn transverse_integral_against_real_axis_sum() {
        // Moderate ka so the real-axis integral can be summed with a damping window.
        let (a, k) = (1.0, 60.0);
        let spec = QuadratureSpec {
            rel_tolerance: 1e-12,
            ..QuadratureSpec::default()
        };
        let rotated = transverse(a, k, &spec).unwrap();
        // e^{ik(ρ-a)}/ρ with a slow e^{-εz²} regulator, ε → 0 extrapolated linearly.
        let real_axis = |eps: f64| {
            let half = (40.0 / eps).sqrt();
            crate::quadrature::oscillatory_integrate_1d(
                |z| {
                    let rho = (a * a + z * z).sqrt();
                    Complex64::from_polar((-eps * z * z).exp() / rho, k * (rho - a))
                },
                |z| k * z.abs() / (a * a + z * z).sqrt(),
                (-half, half),
                &spec,
            )
            .unwrap()
        };
        let e1 = real_axis(1e-3);
        let e2 = real_axis(5e-4);
        let extrapolated = 2.0 * e2 - e1;
        assert!((extrapolated - rotated).norm() < 1e-3 * rotated.norm(), "{extrapolated} vs {rotated}");
    }

    #[test]
    fn budget_refuses_electron_grid() {
        let s = validate(Preset::Electron.setup()).unwrap();
        let err = k2_pair_direct(&s, OrderedSlitPair::new(0, 1).unwrap(), 0.0, None, &QuadratureSpec::default());
        assert!(matches!(err, Err(Error::Budget { .. })), "{err:?}");
    }
}
