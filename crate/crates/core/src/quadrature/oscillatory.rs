use num_complex::Complex64;

use super::mesh::{panels_for_rate, Mesh};
use super::QuadratureSpec;
use crate::error::{Error, Result};

/// Rounding-noise floor, in units of `eps * sum |w f|`, below which two
/// iterates are considered equal even when the integral itself is ~0.
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

/// A converged quadrature result with its refinement history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converged {
    pub value: Complex64,
    /// Number of mesh doublings performed.
    pub refinements: u32,
    /// Nodes (per axis) of the accepted mesh.
    pub nodes: usize,
}

pub(crate) fn accepted(previous: Complex64, last: Complex64, l1: f64, tol: f64) -> bool {
    let diff = (last - previous).norm();
    diff <= tol * last.norm() || diff <= NOISE_FLOOR * l1
}

fn finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("integrand produced a non-finite value {z}")))
    }
}

/// Drive mesh doubling until two successive levels agree.
///
/// `level(panels)` returns the quadrature value and `sum |w f|` for a mesh with
/// the given number of panels per axis.
pub(crate) fn refine(
    initial_panels: usize,
    spec: &QuadratureSpec,
    mut level: impl FnMut(usize) -> Result<(Complex64, f64, usize)>,
) -> Result<Converged> {
    spec.validate()?;
    let mut panels = initial_panels.max(1);
    let (mut previous, _, _) = level(panels)?;
    finite(previous)?;
    for refinement in 1..=spec.max_refinements {
        panels *= 2;
        let (last, l1, nodes) = level(panels)?;
        finite(last)?;
        if accepted(previous, last, l1, spec.rel_tolerance) {
            return Ok(Converged {
                value: last,
                refinements: refinement,
                nodes,
            });
        }
        if refinement == spec.max_refinements {
            return Err(Error::Convergence {
                refinements: refinement,
                previous,
                last,
            });
        }
        previous = last;
    }
    unreachable!("max_refinements >= 1 is validated")
}

/// Integrate a complex integrand over `[a, b]` on a mesh sized from the local
/// phase rate, doubling the mesh until successive values agree.
pub fn oscillatory_integrate_1d<F, R>(
    integrand: F,
    phase_rate: R,
    interval: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
    R: Fn(f64) -> f64,
{
    integrate_1d_detailed(integrand, phase_rate, interval, spec).map(|c| c.value)
}

pub fn integrate_1d_detailed<F, R>(
    integrand: F,
    phase_rate: R,
    (a, b): (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Converged>
where
    F: Fn(f64) -> Complex64,
    R: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain(format!("invalid interval ({a}, {b})")));
    }
    let panels = panels_for_rate(&phase_rate, a, b, spec.points_per_cycle);
    refine(panels, spec, |n| {
        let mesh = Mesh::composite(a, b, n);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut l1 = 0.0;
        for (x, w) in mesh.iter() {
            let f = integrand(x);
            sum += f * w;
            l1 += w * f.norm();
        }
        Ok((sum, l1, mesh.len()))
    })
}

/// Axis-aligned integration rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x: (f64, f64),
    pub y: (f64, f64),
    /// The integrand is singular on `x = y`; the rectangle must stay clear of it.
    pub singular_diagonal: bool,
}

impl Rectangle {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Rectangle {
            x,
            y,
            singular_diagonal: false,
        }
    }

    pub fn with_singular_diagonal(mut self) -> Self {
        self.singular_diagonal = true;
        self
    }

    /// True when the closed rectangle intersects the line `x = y`.
    pub fn touches_diagonal(&self) -> bool {
        self.x.0 <= self.y.1 && self.y.0 <= self.x.1
    }
}

/// Tensor-product version of [`oscillatory_integrate_1d`].
pub fn oscillatory_integrate_2d<F, Rx, Ry>(
    integrand: F,
    phase_rates: (Rx, Ry),
    region: Rectangle,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
    Rx: Fn(f64) -> f64,
    Ry: Fn(f64) -> f64,
{
    integrate_2d_detailed(integrand, phase_rates, region, spec).map(|c| c.value)
}

pub fn integrate_2d_detailed<F, Rx, Ry>(
    integrand: F,
    (rate_x, rate_y): (Rx, Ry),
    region: Rectangle,
    spec: &QuadratureSpec,
) -> Result<Converged>
where
    F: Fn(f64, f64) -> Complex64,
    Rx: Fn(f64) -> f64,
    Ry: Fn(f64) -> f64,
{
    let (x0, x1) = region.x;
    let (y0, y1) = region.y;
    if !(x0.is_finite() && x1.is_finite() && x0 < x1 && y0.is_finite() && y1.is_finite() && y0 < y1)
    {
        return Err(Error::Domain(format!("invalid rectangle {region:?}")));
    }
    if region.singular_diagonal && region.touches_diagonal() {
        return Err(Error::Domain(
            "integration rectangle touches the singular diagonal".into(),
        ));
    }
    let px = panels_for_rate(&rate_x, x0, x1, spec.points_per_cycle);
    let py = panels_for_rate(&rate_y, y0, y1, spec.points_per_cycle);
    // Refine both axes together, keeping their panel ratio.
    let base = px.min(py);
    refine(base, spec, |n| {
        let scale = n / base;
        let mx = Mesh::composite(x0, x1, px * scale);
        let my = Mesh::composite(y0, y1, py * scale);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut l1 = 0.0;
        for (x, wx) in mx.iter() {
            let mut row = Complex64::new(0.0, 0.0);
            let mut row_l1 = 0.0;
            for (y, wy) in my.iter() {
                let f = integrand(x, y);
                row += f * wy;
                row_l1 += wy * f.norm();
            }
            sum += row * wx;
            l1 += wx * row_l1;
        }
        Ok((sum, l1, mx.len().max(my.len())))
    })
}
