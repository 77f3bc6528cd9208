//! Continuous Fermat-Weber location in convex polygons.
//!
//! Closed-form mean distances from a point to a segment, to a polygon
//! boundary and to a polygon's interior; a generalized Weiszfeld solver for
//! the boundary problem, gradient descent for the area problem, and a
//! Voronoi k-medians heuristic built on top. The [`oracle`] module holds
//! independent brute-force estimators (quadrature, Monte Carlo, grid search)
//! used to check all of them.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run --release --example segment_kernel
//! cargo run --release --example boundary_weiszfeld
//! cargo run --release --example area_median
//! cargo run --release --example coefficient_gate
//! cargo run --release --example kmedians_square
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod area;
pub mod boundary;
pub mod check;
pub mod cli;
pub mod error;
pub mod geom;
pub mod kmedians;
pub mod oracle;
pub mod segkernel;

pub use area::{area_objective, area_objective_with, solve_area, AreaObjectiveCoeff};
pub use boundary::{
    boundary_gradient, boundary_objective, solve_boundary, weiszfeld_step, DensityMode, SolveReport, SolveSettings,
    Termination,
};
pub use error::{Error, Result};
pub use geom::{edge_det, Containment, ConvexPolygon, GeomError, HalfPlane, Point};
pub use kmedians::{solve_kmedians, voronoi_cells, KMediansRun, KMediansSettings, KMediansState};
pub use oracle::RngSeed;
pub use segkernel::{avg_dist_segment, inv_dist_integrals, SegmentFrame};
