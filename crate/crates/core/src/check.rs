//! Closed form versus oracle comparisons, including the area-coefficient
//! gate that decides which leading coefficient matches Monte Carlo.

use serde::{Deserialize, Serialize};

use crate::area::{area_objective_with, AreaObjectiveCoeff};
use crate::boundary::{boundary_objective, DensityMode};
use crate::error::Result;
use crate::geom::{ConvexPolygon, Point};
use crate::oracle::{adaptive_simpson, boundary_mean_sampled, mc_area_mean, quad_segment_mean, RngSeed};
use crate::segkernel;

/// A candidate is consistent with Monte Carlo within this many standard errors.
pub const GATE_Z: f64 = 4.0;
/// Below this many samples the gate does not adjudicate.
pub const GATE_MIN_SAMPLES: u64 = 10_000;
/// Largest relative standard error at which the gate still adjudicates.
pub const GATE_MAX_REL_STDERR: f64 = 1e-3;
pub const QUAD_TOL: f64 = 1e-12;
pub const BOUNDARY_SAMPLES: usize = 1 << 16;
pub const BOUNDARY_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateStatus {
    Selected,
    Inconclusive,
    /// Neither or both candidates fit the estimate.
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub coefficient: AreaObjectiveCoeff,
    pub label: String,
    pub predicted: f64,
    pub z_score: Option<f64>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOutcome {
    pub status: GateStatus,
    pub selected: Option<AreaObjectiveCoeff>,
    pub shipped: AreaObjectiveCoeff,
    pub mc_mean: f64,
    pub mc_stderr: Option<f64>,
    pub samples: u64,
    pub candidates: Vec<Candidate>,
}

impl GateOutcome {
    /// True when the gate selected exactly the shipped coefficient.
    pub fn confirms_shipped(&self) -> bool {
        self.status == GateStatus::Selected && self.selected == Some(self.shipped)
    }
}

/// Compares both coefficient candidates for the normalized area objective at
/// `x` against a Monte Carlo estimate.
pub fn coefficient_gate(poly: &ConvexPolygon, x: Point, samples: u64, seed: RngSeed) -> Result<GateOutcome> {
    let mc = mc_area_mean(poly, x, samples, seed)?;
    let candidates = [AreaObjectiveCoeff::DerivedThird, AreaObjectiveCoeff::Half]
        .into_iter()
        .map(|coefficient| {
            let predicted = area_objective_with(poly, x, coefficient, true)?;
            let z_score = mc.stderr.map(|s| (predicted - mc.mean).abs() / s);
            Ok(Candidate {
                coefficient,
                label: coefficient.label().to_string(),
                predicted,
                z_score,
                consistent: z_score.is_some_and(|z| z <= GATE_Z),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let precise = mc.samples >= GATE_MIN_SAMPLES && mc.stderr.is_some_and(|s| s <= GATE_MAX_REL_STDERR * mc.mean.abs());
    let fitting: Vec<_> = candidates.iter().filter(|c| c.consistent).collect();
    let (status, selected) = if !precise {
        (GateStatus::Inconclusive, None)
    } else if fitting.len() == 1 {
        (GateStatus::Selected, Some(fitting[0].coefficient))
    } else {
        (GateStatus::Ambiguous, None)
    };
    Ok(GateOutcome {
        status,
        selected,
        shipped: AreaObjectiveCoeff::default(),
        mc_mean: mc.mean,
        mc_stderr: mc.stderr,
        samples: mc.samples,
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckLine {
    fn new(name: String, closed_form: f64, oracle: f64, tolerance: f64) -> Self {
        let rel_error = (closed_form - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE);
        Self { name, closed_form, oracle, rel_error, tolerance, passed: rel_error < tolerance }
    }
}

/// Per-edge kernel checks against quadrature and the arc-length boundary
/// objective against stratified sampling.
///
/// Kernel checks use `rel_tol`; the sampled boundary mean is held to
/// [`BOUNDARY_REL_TOL`]. A check passes only when its error is strictly
/// below the tolerance.
pub fn closed_form_checks(poly: &ConvexPolygon, x: Point, rel_tol: f64) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();
    for (i, (a, b)) in poly.edges().enumerate() {
        let f = segkernel::avg_dist_segment(x, a, b)?;
        lines.push(CheckLine::new(format!("edge {i} mean distance"), f, quad_segment_mean(x, a, b, QUAD_TOL), rel_tol));
        if let Ok(inv) = segkernel::inv_dist_integrals(x, a, b) {
            let dist = |t: f64| (x - (a * t + b * (1.0 - t))).norm();
            let d = adaptive_simpson(|t| 1.0 / dist(t), 0.0, 1.0, QUAD_TOL);
            let c = adaptive_simpson(|t| t / dist(t), 0.0, 1.0, QUAD_TOL);
            lines.push(CheckLine::new(format!("edge {i} inverse distance"), inv.d, d, rel_tol));
            lines.push(CheckLine::new(format!("edge {i} inverse moment"), inv.c, c, rel_tol));
        }
    }
    lines.push(CheckLine::new(
        "boundary arc-length mean".into(),
        boundary_objective(poly, x, DensityMode::UniformArcLength),
        boundary_mean_sampled(poly, x, BOUNDARY_SAMPLES)?,
        BOUNDARY_REL_TOL,
    ));
    Ok(lines)
}
