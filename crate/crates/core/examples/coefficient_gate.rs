//! Decide the leading coefficient of the area formula by Monte Carlo.
//!
//! cargo run --release --example coefficient_gate

use fermat_weber::check::coefficient_gate;
use fermat_weber::{ConvexPolygon, Point, RngSeed};

fn main() -> fermat_weber::Result<()> {
    let square = ConvexPolygon::regular(4, Point::ORIGIN, 2f64.sqrt(), std::f64::consts::FRAC_PI_4)?;
    for samples in [100, 10_000, 1_000_000] {
        let g = coefficient_gate(&square, Point::ORIGIN, samples, RngSeed(42))?;
        println!(
            "n = {samples}: Monte Carlo {:.6} +- {:.1e} -> {:?}",
            g.mc_mean,
            g.mc_stderr.unwrap_or(f64::NAN),
            g.status
        );
        for c in &g.candidates {
            println!("  {:<4} predicts {:.6}  z {:>8.2}", c.label, c.predicted, c.z_score.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
