use std::f64::consts::PI;

use num_complex::Complex64;

use super::propagator::{distance, Point3};
use crate::error::{Error, Result};
use crate::quadrature::{oscillatory_integrate_2d, QuadratureSpec, Rectangle};

/// Windows with fewer Fresnel zones are refused.
pub const MIN_FRESNEL_ZONES: f64 = 10.0;

/// Fraction of the half-window over which the integrand is tapered to zero.
const TAPER_FRACTION: f64 = 0.3;

/// Square integration window on the intermediate plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HuygensWindow {
    pub centre: (f64, f64),
    pub half_width: f64,
    /// `p X² / π` with `p = (k/2)(1/x₁ + 1/x₂)`.
    pub fresnel_zones: f64,
}

impl HuygensWindow {
    pub fn new(r1: Point3, r3: Point3, plane_x: f64, half_width: f64, k: f64) -> Result<Self> {
        let x1 = plane_x - r1[0];
        let x2 = r3[0] - plane_x;
        if !(x1 * x2 > 0.0) {
            return Err(Error::Domain(format!(
                "plane x = {plane_x} is not strictly between the end points"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite() && k > 0.0) {
            return Err(Error::Domain(format!("invalid window half-width {half_width}")));
        }
        let t = x1 / (x1 + x2);
        let centre = (r1[1] + t * (r3[1] - r1[1]), r1[2] + t * (r3[2] - r1[2]));
        let p = 0.5 * k * (1.0 / x1.abs() + 1.0 / x2.abs());
        let fresnel_zones = p * half_width * half_width / PI;
        if fresnel_zones < MIN_FRESNEL_ZONES {
            return Err(Error::Domain(format!(
                "window spans {fresnel_zones:.2} Fresnel zones, at least {MIN_FRESNEL_ZONES} needed"
            )));
        }
        Ok(HuygensWindow {
            centre,
            half_width,
            fresnel_zones,
        })
    }

    /// Raised-cosine edge: 1 in the interior, falling to 0 at the window edge.
    fn taper(&self, offset: f64) -> f64 {
        let flat = (1.0 - TAPER_FRACTION) * self.half_width;
        let u = offset.abs();
        if u <= flat {
            1.0
        } else if u >= self.half_width {
            0.0
        } else {
            0.5 * (1.0 + (PI * (u - flat) / (TAPER_FRACTION * self.half_width)).cos())
        }
    }
}

/// `∫ K(r₁, r₂) K(r₂, r₃) dA` over a square window on the plane `x = plane_x`,
/// centred where the straight line `r₁r₃` crosses it.
///
/// The window edge is softened with a raised-cosine taper so that the
/// truncation does not ring.
pub fn huygens_compose(
    r1: Point3,
    r3: Point3,
    plane_x: f64,
    half_window: f64,
    k: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let window = HuygensWindow::new(r1, r3, plane_x, half_window, k)?;
    let x1 = (plane_x - r1[0]).abs();
    let x2 = (r3[0] - plane_x).abs();
    let (yc, zc) = window.centre;
    // Path excess over x₁ + x₂, formed without cancellation.
    let excess = |y: f64, z: f64| {
        let a = [plane_x, y, z];
        let ra = distance(r1, a);
        let rb = distance(a, r3);
        let ta = (y - r1[1]).powi(2) + (z - r1[2]).powi(2);
        let tb = (y - r3[1]).powi(2) + (z - r3[2]).powi(2);
        (ta / (ra + x1) + tb / (rb + x2), ra, rb)
    };
    let rate = |u: f64, from: f64, to: f64| {
        let ra = (x1 * x1 + (u - from).powi(2)).sqrt();
        let rb = (x2 * x2 + (u - to).powi(2)).sqrt();
        k * ((u - from) / ra + (u - to) / rb).abs()
    };
    let integral = oscillatory_integrate_2d(
        |y, z| {
            let (s, ra, rb) = excess(y, z);
            let w = window.taper(y - yc) * window.taper(z - zc);
            Complex64::from_polar(w / (ra * rb), k * s)
        },
        (|y| rate(y, r1[1], r3[1]), |z| rate(z, r1[2], r3[2])),
        Rectangle::new((yc - half_window, yc + half_window), (zc - half_window, zc + half_window)),
        spec,
    )?;
    let norm = Complex64::new(0.0, -k / (2.0 * PI));
    Ok(norm * norm * Complex64::from_polar(1.0, k * (x1 + x2)) * integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::free_propagator;

    const K: f64 = 2.0 * PI / 1e-6;

    fn half_width_for(zones: f64, x1: f64, x2: f64) -> f64 {
        let p = 0.5 * K * (1.0 / x1 + 1.0 / x2);
        (zones * PI / p).sqrt()
    }

    #[test]
    fn composes_to_direct_propagator() {
        let r1 = [0.0, 0.0, 0.0];
        let r3 = [0.2, 1e-4, -5e-5];
        let x = 0.1;
        let direct = free_propagator(r1, r3, K).unwrap();
        let folded =
            huygens_compose(r1, r3, x, half_width_for(30.0, 0.1, 0.1), K, &QuadratureSpec::default()).unwrap();
        let rel = (folded - direct).norm() / direct.norm();
        assert!(rel < 1e-2, "relative error {rel}");
    }

    #[test]
    fn too_few_zones() {
        let r1 = [0.0; 3];
        let r3 = [0.2, 0.0, 0.0];
        let err = huygens_compose(r1, r3, 0.1, half_width_for(5.0, 0.1, 0.1), K, &QuadratureSpec::default());
        assert!(matches!(err, Err(Error::Domain(_))));
        assert!(HuygensWindow::new(r1, r3, 0.3, 1.0, K).is_err());
    }

    #[test]
    fn swapping_end_points() {
        let r1 = [0.0, 2e-5, 0.0];
        let r3 = [0.3, -1e-5, 0.0];
        let h = half_width_for(12.0, 0.15, 0.15);
        let spec = QuadratureSpec::default();
        let forward = huygens_compose(r1, r3, 0.15, h, K, &spec).unwrap();
        let backward = huygens_compose(r3, r1, 0.15, h, K, &spec).unwrap();
        assert!((forward - backward).norm() < 1e-9 * forward.norm());
    }
}
