//! Mean and inverse distances from a point to a segment, next to their
//! quadrature values.
//!
//! cargo run --example segment_kernel

use fermat_weber::oracle::{adaptive_simpson, quad_segment_mean};
use fermat_weber::segkernel::frame;
use fermat_weber::{avg_dist_segment, inv_dist_integrals, Point};

fn main() -> fermat_weber::Result<()> {
    let cases = [
        (Point::new(0.0, 0.0), Point::new(-1.0, 1.0), Point::new(1.0, 1.0)),
        (Point::new(2.0, 0.0), Point::new(0.0, 0.0), Point::new(1.0, 0.0)),
        (Point::new(0.3, -0.7), Point::new(1.0, 2.0), Point::new(-3.0, 0.5)),
        (Point::new(1e6, 1e6), Point::new(0.0, 0.0), Point::new(1.0, 0.0)),
    ];
    for (x, p1, p2) in cases {
        let fr = frame(x, p1, p2)?;
        println!("X = {x}, segment {p1} -> {p2}");
        println!("  alpha {:.6}  beta {:.6}  gamma {:.6}", fr.alpha, fr.beta, fr.gamma);
        println!(
            "  mean distance {:.15}  quadrature {:.15}",
            avg_dist_segment(x, p1, p2)?,
            quad_segment_mean(x, p1, p2, 1e-12)
        );
        match inv_dist_integrals(x, p1, p2) {
            Ok(inv) => {
                let dist = |t: f64| (x - (p1 * t + p2 * (1.0 - t))).norm();
                let d = adaptive_simpson(|t| 1.0 / dist(t), 0.0, 1.0, 1e-14);
                println!("  d {:.6e} (quadrature {:.6e})  c {:.6e}", inv.d, d, inv.c);
            }
            Err(e) => println!("  inverse distances: {e}"),
        }
    }

    // Points on the segment have a finite mean distance but no inverse integral.
    let (p1, p2) = (Point::new(0.0, 0.0), Point::new(2.0, 0.0));
    let on = Point::new(0.5, 0.0);
    println!(
        "on the segment: mean {:.6}, inverse {:?}",
        avg_dist_segment(on, p1, p2)?,
        inv_dist_integrals(on, p1, p2).err()
    );
    Ok(())
}
