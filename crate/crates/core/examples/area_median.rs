//! The continuous 1-median of a polygon's area, checked against Monte Carlo
//! and a grid search.
//!
//! cargo run --release --example area_median

use fermat_weber::oracle::{grid_min_zoom, mc_area_mean};
use fermat_weber::{area_objective, solve_area, ConvexPolygon, Point, RngSeed, SolveSettings};

fn main() -> fermat_weber::Result<()> {
    let tri = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(0.0, 3.0)])?;
    let r = solve_area(&tri, None, &SolveSettings::for_polygon(&tri))?;
    println!("area median {}  mean distance {:.10}  ({} iterations)", r.minimizer, r.objective, r.iterations);
    println!("centroid    {}  mean distance {:.10}", tri.centroid(), area_objective(&tri, tri.centroid(), true)?);

    let grid = grid_min_zoom(&tri, |p| area_objective(&tri, p, true).unwrap_or(f64::INFINITY), 1e-3)?;
    println!("grid search {grid}");

    let mc = mc_area_mean(&tri, r.minimizer, 1_000_000, RngSeed(1))?;
    println!("Monte Carlo {:.6} +- {:.1e}", mc.mean, mc.stderr.unwrap_or(0.0));

    // Unnormalized, the objective is the total transport cost.
    println!("total cost {:.10} over area {}", area_objective(&tri, r.minimizer, false)?, tri.signed_area());
    Ok(())
}
