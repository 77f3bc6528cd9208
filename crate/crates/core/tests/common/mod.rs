#![allow(dead_code)]

use fermat_weber::oracle::PolygonSampler;
use fermat_weber::{ConvexPolygon, Point};
use rand::Rng;

/// Random convex n-gon: sorted angles on the unit circle pushed through a
/// random orientation-preserving affine map.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, n: usize) -> ConvexPolygon {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let min_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain([angles[0] + std::f64::consts::TAU - angles[n - 1]])
            .fold(f64::INFINITY, f64::min);
        if min_gap < 0.05 {
            continue;
        }
        let (a, b, c, d) =
            (rng.gen_range(0.5..2.0), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0));
        if a * d - b * c < 0.2 {
            continue;
        }
        let shift = Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let pts = angles
            .iter()
            .map(|t| {
                let (s, c0) = t.sin_cos();
                Point::new(a * c0 + b * s, c * c0 + d * s) + shift
            })
            .collect();
        // Reject slivers so interior points with a margin are easy to find.
        if let Ok(p) = ConvexPolygon::new(pts) {
            if p.inner_distance(p.centroid()) > 0.05 * p.diameter() {
                return p;
            }
        }
    }
}

/// Uniform interior point at least `margin * diameter` from the boundary.
pub fn random_interior_point<R: Rng>(rng: &mut R, poly: &ConvexPolygon, margin: f64) -> Point {
    let sampler = PolygonSampler::new(poly);
    for _ in 0..100_000 {
        let p = sampler.sample(rng);
        if poly.inner_distance(p) > margin * poly.diameter() {
            return p;
        }
    }
    panic!("no point {margin} x diameter inside {:?}", poly.vertices());
}

/// Random point and non-degenerate segment with the point well off it.
pub fn random_off_segment<R: Rng>(rng: &mut R) -> (Point, Point, Point) {
    loop {
        let mut p = || Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let (x, p1, p2) = (p(), p(), p());
        let len = p1.dist(p2);
        let height = (p1 - x).cross(p2 - x).abs() / len;
        if len > 1e-2 && height > 1e-3 * len {
            return (x, p1, p2);
        }
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
