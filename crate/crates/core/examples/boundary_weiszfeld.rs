//! Minimize the mean distance to a polygon boundary with the generalized
//! Weiszfeld iteration, under both density models.
//!
//! cargo run --example boundary_weiszfeld

use fermat_weber::{solve_boundary, ConvexPolygon, DensityMode, Point, SolveSettings};

fn main() -> fermat_weber::Result<()> {
    // A lopsided pentagon: long bottom edge, short edges on top.
    let poly = ConvexPolygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(6.0, 0.0),
        Point::new(6.5, 1.0),
        Point::new(3.0, 3.0),
        Point::new(0.2, 1.5),
    ])?;
    let settings = SolveSettings::for_polygon(&poly);
    for mode in [DensityMode::UniformArcLength, DensityMode::PerEdgeEqual] {
        let r = solve_boundary(&poly, Some(Point::new(1.0, 0.5)), mode, &settings)?;
        println!("{mode:?}");
        println!("  minimizer {}  objective {:.10}", r.minimizer, r.objective);
        println!("  {} iterations, {:?}, rate {:?}", r.iterations, r.termination, r.rate_estimate);
        for (i, (p, f)) in r.iterates.iter().zip(&r.objectives).enumerate().take(6) {
            println!("  {i:>3}  {p}  {f:.12}");
        }
    }

    // The same solver on a regular hexagon: lands on the center at a steady rate.
    let hex = ConvexPolygon::regular(6, Point::ORIGIN, 1.0, 0.0)?;
    let r = solve_boundary(
        &hex,
        Some(Point::new(0.4, 0.2)),
        DensityMode::UniformArcLength,
        &SolveSettings::for_polygon(&hex),
    )?;
    println!(
        "hexagon: {} after {} iterations, gap ratio {:.3}",
        r.minimizer,
        r.iterations,
        r.rate_estimate.unwrap_or(f64::NAN)
    );
    Ok(())
}
