//! Mean distance from a point to the whole polygon.
//!
//! Fan the polygon into triangles `(X, P_i, P_{i+1})` and shrink each edge
//! toward `X` by a factor `lambda`. The strip at scale `lambda` has area
//! element `lambda * edge_det * dlambda` and its points sit at mean distance
//! `lambda * F_i`, so
//!
//! ```text
//! int_P |X - U| dU = sum_i F_i * edge_det_i * int_0^1 lambda^2 dlambda
//!                  = (1/3) sum_i F_i * edge_det_i
//! ```
//!
//! The identity holds with signed determinants for any `X`; the public
//! evaluators still refuse exterior points.

use serde::{Deserialize, Serialize};

use crate::boundary::{SolveReport, SolveSettings, Termination, Trail};
use crate::error::{Error, Result};
use crate::geom::{edge_det, Containment, ConvexPolygon, Point};
use crate::segkernel;

/// Leading coefficient of the fan sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AreaObjectiveCoeff {
    /// `1/2`, from an integrand carrying a single `lambda` factor.
    Half,
    /// `1/3`, from the `lambda^2` integrand. Matches Monte Carlo.
    #[default]
    DerivedThird,
}

impl AreaObjectiveCoeff {
    pub fn value(self) -> f64 {
        match self {
            AreaObjectiveCoeff::Half => 0.5,
            AreaObjectiveCoeff::DerivedThird => 1.0 / 3.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AreaObjectiveCoeff::Half => "1/2",
            AreaObjectiveCoeff::DerivedThird => "1/3",
        }
    }
}

/// Relative FD step used by [`area_gradient`].
pub const FD_REL_STEP: f64 = 1e-6;

const ARMIJO_C: f64 = 1e-4;

/// `F(x, lambda pi + (1 - lambda) x, lambda pj + (1 - lambda) x)`.
pub fn scaled_segment_f(x: Point, pi: Point, pj: Point, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidSetting("scale factor must lie in [0, 1]"));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    segkernel::avg_dist_segment(x, pi * lambda + x * (1.0 - lambda), pj * lambda + x * (1.0 - lambda))
}

fn fan_sum(poly: &ConvexPolygon, x: Point) -> f64 {
    poly.edges().map(|(a, b)| segkernel::frame_unchecked(x, a, b).mean_distance() * edge_det(x, a, b)).sum()
}

/// Mean distance to a uniform interior point, using the shipped coefficient.
pub fn area_objective(poly: &ConvexPolygon, x: Point, normalize: bool) -> Result<f64> {
    area_objective_with(poly, x, AreaObjectiveCoeff::default(), normalize)
}

/// Total (or, with `normalize`, mean) distance from `x` to the polygon.
pub fn area_objective_with(poly: &ConvexPolygon, x: Point, coeff: AreaObjectiveCoeff, normalize: bool) -> Result<f64> {
    if poly.contains(x) == Containment::Exterior {
        return Err(Error::ExteriorPoint(x));
    }
    let total = coeff.value() * fan_sum(poly, x);
    Ok(if normalize { total / poly.signed_area() } else { total })
}

fn mean_unchecked(poly: &ConvexPolygon, x: Point) -> f64 {
    AreaObjectiveCoeff::default().value() * fan_sum(poly, x) / poly.signed_area()
}

/// Central-difference gradient of the normalized objective with step `h`.
pub fn area_gradient_with_step(poly: &ConvexPolygon, x: Point, h: f64) -> Result<Point> {
    match poly.contains(x) {
        Containment::Interior => {}
        Containment::Boundary => return Err(Error::SingularPoint(x)),
        Containment::Exterior => return Err(Error::ExteriorPoint(x)),
    }
    let dx = Point::new(h, 0.0);
    let dy = Point::new(0.0, h);
    let gx = (mean_unchecked(poly, x + dx) - mean_unchecked(poly, x - dx)) / (2.0 * h);
    let gy = (mean_unchecked(poly, x + dy) - mean_unchecked(poly, x - dy)) / (2.0 * h);
    Ok(Point::new(gx, gy))
}

/// Gradient of the normalized objective, step `FD_REL_STEP * diameter`.
pub fn area_gradient(poly: &ConvexPolygon, x: Point) -> Result<Point> {
    area_gradient_with_step(poly, x, FD_REL_STEP * poly.diameter())
}

/// Gradient descent with Armijo backtracking on the normalized objective.
///
/// Trial steps start at twice the last accepted one (at most the diameter)
/// and halve until the candidate is interior and decreases enough. The run
/// stops with [`Termination::StepTol`] once an accepted move, or the
/// smallest trial move, is below `step_tol`.
pub fn solve_area(poly: &ConvexPolygon, x0: Option<Point>, settings: &SolveSettings) -> Result<SolveReport> {
    settings.validate()?;
    let mut x = x0.unwrap_or_else(|| poly.vertex_centroid());
    if poly.contains(x) != Containment::Interior {
        return Err(Error::StartNotInterior(x));
    }
    let diameter = poly.diameter();
    let mut f = mean_unchecked(poly, x);
    let mut trail = Trail::new(settings.record_trail, x, f);
    let mut t = diameter;

    for _ in 0..settings.max_iters {
        let g = area_gradient(poly, x)?;
        let g_norm = g.norm();
        if g_norm <= settings.grad_tol {
            return Ok(trail.finish(x, f, Termination::GradTol, None));
        }
        t = (2.0 * t).min(diameter / g_norm);
        let accepted = loop {
            if t * g_norm <= settings.step_tol {
                break None;
            }
            let cand = x - g * t;
            if poly.contains(cand) == Containment::Interior {
                let fc = mean_unchecked(poly, cand);
                if fc < f && fc <= f - ARMIJO_C * t * g_norm * g_norm {
                    break Some((cand, fc));
                }
            }
            t *= 0.5;
        };
        let Some((next, fc)) = accepted else {
            return Ok(trail.finish(x, f, Termination::StepTol, None));
        };
        let moved = next.dist(x);
        trail.push(next, fc);
        (x, f) = (next, fc);
        if moved <= settings.step_tol {
            return Ok(trail.finish(x, f, Termination::StepTol, None));
        }
    }
    Ok(trail.finish(x, f, Termination::MaxIters, None))
}
