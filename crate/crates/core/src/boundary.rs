//! Mean distance from a point to the boundary of a convex polygon, and the
//! generalized Weiszfeld iteration that minimizes it.
//!
//! Edge `i` runs from `P_i` to `P_{i+1}` and is parametrized as
//! `xi(t) = t P_i + (1 - t) P_{i+1}`. With `c_i, d_i` the first and zeroth
//! inverse-distance moments of that edge, the boundary integrals reduce to
//!
//! ```text
//! f(X)      = sum_i w_i F_i / W
//! grad f(X) = sum_i w_i [(X - P_{i+1}) d_i - (P_i - P_{i+1}) c_i] / W
//! T(X)      = sum_i w_i [P_{i+1} d_i + (P_i - P_{i+1}) c_i] / sum_i w_i d_i
//! ```
//!
//! where the weights `w_i` and normalizer `W` depend on [`DensityMode`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Containment, ConvexPolygon, Point};
use crate::segkernel::{self, SegmentFrame};

/// Number of boundary points used to estimate `min f` over the boundary.
pub const GUARD_SAMPLES: usize = 1024;

/// How demand is spread over the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DensityMode {
    /// Constant density per unit arc length; the objective is the arc-length
    /// mean distance.
    #[default]
    UniformArcLength,
    /// Each edge contributes its own mean distance with equal weight.
    PerEdgeEqual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveSettings {
    pub step_tol: f64,
    pub grad_tol: f64,
    pub max_iters: usize,
    pub record_trail: bool,
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self { step_tol: 1e-10, grad_tol: 1e-10, max_iters: 10_000, record_trail: true }
    }
}

impl SolveSettings {
    /// Defaults with the step tolerance scaled to the polygon diameter.
    pub fn for_polygon(poly: &ConvexPolygon) -> Self {
        Self { step_tol: 1e-10 * poly.diameter(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_tol > 0.0) || !(self.grad_tol > 0.0) {
            return Err(Error::InvalidSetting("tolerances must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidSetting("max_iters must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    StepTol,
    GradTol,
    MaxIters,
    LeftInterior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub minimizer: Point,
    pub objective: f64,
    pub iterations: usize,
    /// Full trail when recording, otherwise start and end only.
    pub iterates: Vec<Point>,
    pub objectives: Vec<f64>,
    pub termination: Termination,
    /// Median ratio of successive objective gaps near the end of the run.
    pub rate_estimate: Option<f64>,
    /// Whether the start objective was below the sampled boundary minimum,
    /// which keeps every iterate interior. Boundary solves only.
    pub start_below_boundary_min: Option<bool>,
}

/// Everything one Weiszfeld step needs at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEval {
    pub objective: f64,
    pub gradient: Point,
    /// `int rho / |X - xi|` over the boundary.
    pub inverse_mass: f64,
    pub next: Point,
}

fn edge_frame(x: Point, a: Point, b: Point) -> SegmentFrame {
    segkernel::frame_unchecked(x, a, b)
}

fn edge_weight(mode: DensityMode, len: f64) -> f64 {
    match mode {
        DensityMode::UniformArcLength => len,
        DensityMode::PerEdgeEqual => 1.0,
    }
}

fn normalizer(poly: &ConvexPolygon, mode: DensityMode) -> f64 {
    match mode {
        DensityMode::UniformArcLength => poly.perimeter(),
        DensityMode::PerEdgeEqual => 1.0,
    }
}

/// Finite everywhere in the plane, including on the boundary.
pub fn boundary_objective(poly: &ConvexPolygon, x: Point, mode: DensityMode) -> f64 {
    let total: f64 =
        poly.edges().map(|(a, b)| edge_weight(mode, a.dist(b)) * edge_frame(x, a, b).mean_distance()).sum();
    total / normalizer(poly, mode)
}

pub fn evaluate(poly: &ConvexPolygon, x: Point, mode: DensityMode) -> Result<BoundaryEval> {
    if poly.contains(x) != Containment::Interior {
        return Err(Error::SingularPoint(x));
    }
    let mut objective = 0.0;
    let mut gradient = Point::ORIGIN;
    let mut numerator = Point::ORIGIN;
    let mut mass = 0.0;
    for (a, b) in poly.edges() {
        let w = edge_weight(mode, a.dist(b));
        let frame = edge_frame(x, a, b);
        let inv = frame.inverse_distance().map_err(|_| Error::SingularPoint(x))?;
        objective += w * frame.mean_distance();
        gradient = gradient + ((x - b) * inv.d - (a - b) * inv.c) * w;
        numerator = numerator + (b * inv.d + (a - b) * inv.c) * w;
        mass += w * inv.d;
    }
    let norm = normalizer(poly, mode);
    Ok(BoundaryEval {
        objective: objective / norm,
        gradient: gradient * (1.0 / norm),
        inverse_mass: mass / norm,
        next: numerator * (1.0 / mass),
    })
}

/// Requires `x` strictly interior.
pub fn boundary_gradient(poly: &ConvexPolygon, x: Point, mode: DensityMode) -> Result<Point> {
    Ok(evaluate(poly, x, mode)?.gradient)
}

/// The Weiszfeld map `T(x)`; requires `x` strictly interior.
pub fn weiszfeld_step(poly: &ConvexPolygon, x: Point, mode: DensityMode) -> Result<Point> {
    Ok(evaluate(poly, x, mode)?.next)
}

/// Smallest objective over [`GUARD_SAMPLES`] boundary points spaced evenly
/// in arc length, vertices included.
pub fn sampled_boundary_min(poly: &ConvexPolygon, mode: DensityMode) -> f64 {
    let perimeter = poly.perimeter();
    let mut best = poly.vertices().iter().map(|&v| boundary_objective(poly, v, mode)).fold(f64::INFINITY, f64::min);
    let step = perimeter / GUARD_SAMPLES as f64;
    let mut walked = 0.0;
    for (a, b) in poly.edges() {
        let len = a.dist(b);
        let mut s = (walked / step).ceil() * step - walked;
        while s < len {
            best = best.min(boundary_objective(poly, a.lerp(b, s / len), mode));
            s += step;
        }
        walked += len;
    }
    best
}

/// Median of successive objective-gap ratios over the last ten usable
/// iterations, measured against the final objective.
///
/// Gaps below `1e-11 |f|` are rounding noise and are skipped.
pub fn estimate_rate(objectives: &[f64]) -> Option<f64> {
    let last = *objectives.last()?;
    let floor = 1e-11 * last.abs().max(f64::MIN_POSITIVE);
    let gaps: Vec<f64> = objectives.iter().map(|f| f - last).collect();
    let mut ratios: Vec<f64> = gaps.windows(2).filter(|w| w[1] > floor && w[0] > floor).map(|w| w[1] / w[0]).collect();
    if ratios.is_empty() {
        return None;
    }
    let keep = ratios.len().min(10);
    let mut tail = ratios.split_off(ratios.len() - keep);
    tail.sort_by(f64::total_cmp);
    let mid = tail.len() / 2;
    Some(if tail.len() % 2 == 1 { tail[mid] } else { 0.5 * (tail[mid - 1] + tail[mid]) })
}

pub(crate) struct Trail {
    record: bool,
    iterates: Vec<Point>,
    objectives: Vec<f64>,
    all_objectives: Vec<f64>,
}

impl Trail {
    pub(crate) fn new(record: bool, x: Point, f: f64) -> Self {
        Self { record, iterates: vec![x], objectives: vec![f], all_objectives: vec![f] }
    }

    pub(crate) fn push(&mut self, x: Point, f: f64) {
        self.all_objectives.push(f);
        if self.record {
            self.iterates.push(x);
            self.objectives.push(f);
        }
    }

    pub(crate) fn finish(
        mut self,
        at: Point,
        value: f64,
        termination: Termination,
        guard: Option<bool>,
    ) -> SolveReport {
        if !self.record && self.all_objectives.len() > 1 {
            self.iterates.push(at);
            self.objectives.push(value);
        }
        SolveReport {
            minimizer: at,
            objective: value,
            iterations: self.all_objectives.len() - 1,
            iterates: self.iterates,
            objectives: self.objectives,
            termination,
            rate_estimate: estimate_rate(&self.all_objectives),
            start_below_boundary_min: guard,
        }
    }
}

/// Iterates `X <- T(X)` from `x0` (default: vertex centroid).
///
/// Every step is checked for descent; an increase beyond `1e-12 |f|` is an
/// error. An iterate that reaches the boundary ends the run with
/// [`Termination::LeftInterior`] at the last interior point.
pub fn solve_boundary(
    poly: &ConvexPolygon,
    x0: Option<Point>,
    mode: DensityMode,
    settings: &SolveSettings,
) -> Result<SolveReport> {
    settings.validate()?;
    let mut x = x0.unwrap_or_else(|| poly.vertex_centroid());
    if poly.contains(x) != Containment::Interior {
        return Err(Error::StartNotInterior(x));
    }
    let mut eval = evaluate(poly, x, mode)?;
    let guard = eval.objective < sampled_boundary_min(poly, mode);
    let mut trail = Trail::new(settings.record_trail, x, eval.objective);

    for iteration in 1..=settings.max_iters {
        let next = eval.next;
        if poly.contains(next) != Containment::Interior {
            return Ok(trail.finish(x, eval.objective, Termination::LeftInterior, Some(guard)));
        }
        let step = next.dist(x);
        if step > settings.step_tol && eval.gradient.norm() <= settings.grad_tol {
            return Ok(trail.finish(x, eval.objective, Termination::GradTol, Some(guard)));
        }
        let next_eval = evaluate(poly, next, mode)?;
        if next_eval.objective > eval.objective + 1e-12 * eval.objective.abs() {
            return Err(Error::DescentViolated { iteration, before: eval.objective, after: next_eval.objective });
        }
        trail.push(next, next_eval.objective);
        x = next;
        eval = next_eval;
        if step <= settings.step_tol {
            return Ok(trail.finish(x, eval.objective, Termination::StepTol, Some(guard)));
        }
    }
    Ok(trail.finish(x, eval.objective, Termination::MaxIters, Some(guard)))
}
