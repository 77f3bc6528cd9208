//! Voronoi k-medians on a square, from random and symmetric starts.
//!
//! cargo run --release --example kmedians_square

use fermat_weber::kmedians::run_kmedians;
use fermat_weber::{solve_kmedians, ConvexPolygon, KMediansSettings, Point, RngSeed};

fn main() -> fermat_weber::Result<()> {
    let square = ConvexPolygon::regular(4, Point::ORIGIN, 2f64.sqrt(), std::f64::consts::FRAC_PI_4)?;
    let settings = KMediansSettings::for_polygon(&square);
    for k in 1..=5 {
        let run = solve_kmedians(&square, k, RngSeed(7), &settings)?;
        let s = &run.state;
        println!("k = {k}: total {:.8} after {} rounds (converged: {})", s.total_objective, s.iteration, run.converged);
        for (site, cell) in s.sites.iter().zip(&s.cells) {
            let area = cell.as_ref().map_or(0.0, ConvexPolygon::signed_area);
            println!("  site {site}  cell area {area:.6}");
        }
    }

    let seeds = vec![Point::new(0.3, 0.2), Point::new(-0.25, 0.35), Point::new(-0.4, -0.3), Point::new(0.2, -0.45)];
    let run = run_kmedians(&square, seeds, &settings)?;
    println!("symmetric start: {:?}", run.state.sites.iter().map(|p| format!("{p}")).collect::<Vec<_>>());
    println!("objective trail {:?}", &run.objective_trail[..run.objective_trail.len().min(5)]);
    Ok(())
}
