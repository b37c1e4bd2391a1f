use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Point3 = [f64; 3];

pub(crate) fn distance(r1: Point3, r2: Point3) -> f64 {
    let dx = r1[0] - r2[0];
    let dy = r1[1] - r2[1];
    let dz = r1[2] - r2[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Free-space kernel `K(r1, r2) = (k / 2πi) e^{ik|r1-r2|} / |r1-r2|`.
///
/// This is a raw kernel with dimension 1/length²·length; only ratios of such
/// values are meaningful.
pub fn free_propagator(r1: Point3, r2: Point3, k: f64) -> Result<Complex64> {
    let r = distance(r1, r2);
    if r == 0.0 {
        return Err(Error::Domain("free propagator between coincident points".into()));
    }
    Ok(propagator_at_distance(r, k))
}

pub(crate) fn propagator_at_distance(r: f64, k: f64) -> Complex64 {
    // k / (2πi) = -i k / 2π
    Complex64::new(0.0, -k / (2.0 * PI)) * Complex64::from_polar(1.0 / r, k * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_separation_at_two_pi() {
        let v = free_propagator([0.0; 3], [1.0, 0.0, 0.0], 2.0 * PI).unwrap();
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn symmetric_in_arguments() {
        let a = [0.1, -0.3, 2.0];
        let b = [1.7, 0.4, -0.2];
        assert_eq!(free_propagator(a, b, 31.0).unwrap(), free_propagator(b, a, 31.0).unwrap());
    }

    #[test]
    fn inverse_distance_law() {
        let k = 12.0;
        let near = free_propagator([0.0; 3], [0.0, 0.0, 1.5], k).unwrap();
        let far = free_propagator([0.0; 3], [0.0, 0.0, 3.0], k).unwrap();
        assert!((far.norm() - 0.5 * near.norm()).abs() < 1e-15);
    }

    #[test]
    fn coincident_points() {
        assert!(matches!(free_propagator([1.0; 3], [1.0; 3], 1.0), Err(Error::Domain(_))));
    }
}
