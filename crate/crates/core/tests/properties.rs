mod common;

use common::{random_convex_polygon, random_interior_point, random_off_segment, rel_err};
use fermat_weber::area::scaled_segment_f;
use fermat_weber::boundary::evaluate;
use fermat_weber::kmedians::{kmedians_step, KMediansState};
use fermat_weber::oracle::{adaptive_simpson, mc_area_mean, mc_area_means};
use fermat_weber::{
    area_objective, avg_dist_segment, boundary_gradient, boundary_objective, edge_det, solve_boundary, solve_kmedians,
    weiszfeld_step, Containment, ConvexPolygon, DensityMode, HalfPlane, KMediansSettings, Point, RngSeed,
    SolveSettings,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn polygon_and_rng(seed: u64, max_n: usize) -> (ConvexPolygon, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=max_n);
    (random_convex_polygon(&mut rng, n), rng)
}

/// Arc-length mean of `g(xi)` over the boundary, by quadrature per edge.
fn boundary_quad(poly: &ConvexPolygon, g: impl Fn(Point) -> f64) -> f64 {
    let total: f64 =
        poly.edges().map(|(a, b)| a.dist(b) * adaptive_simpson(|t| g(a * t + b * (1.0 - t)), 0.0, 1.0, 1e-13)).sum();
    total / poly.perimeter()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_dets_positive_and_sum_to_twice_area(seed in any::<u64>()) {
        let (poly, mut rng) = polygon_and_rng(seed, 12);
        let x = random_interior_point(&mut rng, &poly, 1e-6);
        let mut sum = 0.0;
        for (a, b) in poly.edges() {
            let d = edge_det(x, a, b);
            prop_assert!(d > 0.0);
            sum += d;
        }
        prop_assert!(rel_err(sum, 2.0 * poly.signed_area()) < 1e-12);
    }

    #[test]
    fn clipping_is_idempotent(seed in any::<u64>(), angle in 0.0..std::f64::consts::TAU, frac in 0.05f64..0.95) {
        let (poly, _) = polygon_and_rng(seed, 10);
        let normal = Point::new(angle.cos(), angle.sin());
        let proj: Vec<f64> = poly.vertices().iter().map(|v| v.dot(normal)).collect();
        let (lo, hi) = proj.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &p| (l.min(p), h.max(p)));
        let h = HalfPlane::new(normal, lo + frac * (hi - lo)).unwrap();
        if let Some(once) = poly.clip_halfplane(&h) {
            let twice = once.clip_halfplane(&h).expect("clipped polygon survives a second clip");
            prop_assert_eq!(once.len(), twice.len());
            for (a, b) in once.vertices().iter().zip(twice.vertices()) {
                prop_assert!(a.dist(*b) <= 1e-12 * poly.diameter());
            }
        }
    }

    #[test]
    fn centroid_is_interior_and_canonical_form_is_stable(seed in any::<u64>()) {
        let (poly, _) = polygon_and_rng(seed, 12);
        prop_assert_eq!(poly.contains(poly.centroid()), Containment::Interior);
        let again = ConvexPolygon::new(poly.vertices().to_vec()).unwrap();
        prop_assert_eq!(again.vertices(), poly.vertices());
    }

    #[test]
    fn segment_mean_is_rigid_invariant(seed in any::<u64>(), angle in -3.2f64..3.2, dx in -50.0f64..50.0, dy in -50.0f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, p1, p2) = random_off_segment(&mut rng);
        let by = Point::new(dx, dy);
        let m = |p: Point| p.rotate(angle) + by;
        let f = avg_dist_segment(x, p1, p2).unwrap();
        let g = avg_dist_segment(m(x), m(p1), m(p2)).unwrap();
        prop_assert!(rel_err(g, f) < 1e-12, "{} vs {}", g, f);
    }

    #[test]
    fn segment_mean_is_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, p1, p2) = random_off_segment(&mut rng);
        let f = avg_dist_segment(x, p1, p2).unwrap();
        let d = p2 - p1;
        let t = ((x - p1).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
        let nearest = x.dist(p1 + d * t);
        let farthest = x.dist(p1).max(x.dist(p2));
        prop_assert!(nearest <= f * (1.0 + 1e-15) && f <= farthest * (1.0 + 1e-15));
    }

    #[test]
    fn segment_mean_from_endpoint_is_half_length(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, p1, p2) = random_off_segment(&mut rng);
        prop_assert!(rel_err(avg_dist_segment(p2, p1, p2).unwrap(), 0.5 * p1.dist(p2)) < 1e-14);
    }

    #[test]
    fn homothety_scales_mean_distance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, pi, pj) = random_off_segment(&mut rng);
        let f = avg_dist_segment(x, pi, pj).unwrap();
        for lambda in [0.1, 0.5, 0.9, 1.0] {
            prop_assert!(rel_err(scaled_segment_f(x, pi, pj, lambda).unwrap(), lambda * f) < 1e-12);
        }
    }

    #[test]
    fn weiszfeld_step_descends(seed in any::<u64>(), per_edge in any::<bool>()) {
        let (poly, mut rng) = polygon_and_rng(seed, 9);
        let mode = if per_edge { DensityMode::PerEdgeEqual } else { DensityMode::UniformArcLength };
        let x = random_interior_point(&mut rng, &poly, 1e-3);
        let next = weiszfeld_step(&poly, x, mode).unwrap();
        let (before, after) = (boundary_objective(&poly, x, mode), boundary_objective(&poly, next, mode));
        prop_assert!(after <= before * (1.0 + 1e-12), "{} -> {}", before, after);
    }

    #[test]
    fn step_length_measures_gradient(seed in any::<u64>()) {
        // grad f(X) = (X - T(X)) * integral of rho / |X - xi|
        let (poly, mut rng) = polygon_and_rng(seed, 9);
        let mode = DensityMode::UniformArcLength;
        let x = random_interior_point(&mut rng, &poly, 1e-2);
        let g = boundary_gradient(&poly, x, mode).unwrap();
        let step = weiszfeld_step(&poly, x, mode).unwrap();
        let mass = boundary_quad(&poly, |xi| 1.0 / x.dist(xi));
        let predicted = (x - step) * mass;
        prop_assert!((g - predicted).norm() <= 1e-9 * g.norm().max(1e-6), "{} vs {}", g, predicted);
    }

    #[test]
    fn surrogate_touches_objective(seed in any::<u64>()) {
        let (poly, mut rng) = polygon_and_rng(seed, 9);
        let x = random_interior_point(&mut rng, &poly, 1e-2);
        let q = boundary_quad(&poly, |xi| xi.dist(x).powi(2) / xi.dist(x));
        prop_assert!(rel_err(q, boundary_objective(&poly, x, DensityMode::UniformArcLength)) < 1e-10);
    }

    #[test]
    fn boundary_solver_is_rigid_equivariant(seed in any::<u64>(), angle in -3.2f64..3.2, dx in -20.0f64..20.0, dy in -20.0f64..20.0) {
        let (poly, _) = polygon_and_rng(seed, 8);
        let by = Point::new(dx, dy);
        let moved = poly.rigid_motion(angle, by);
        let s = SolveSettings::for_polygon(&poly);
        let a = solve_boundary(&poly, None, DensityMode::UniformArcLength, &s).unwrap();
        let b = solve_boundary(&moved, None, DensityMode::UniformArcLength, &s).unwrap();
        prop_assert!((a.minimizer.rotate(angle) + by).dist(b.minimizer) < 1e-7);
    }

    #[test]
    fn area_objective_is_convex_along_segments(seed in any::<u64>()) {
        let (poly, mut rng) = polygon_and_rng(seed, 9);
        let a = random_interior_point(&mut rng, &poly, 1e-3);
        let b = random_interior_point(&mut rng, &poly, 1e-3);
        let f = |p: Point| area_objective(&poly, p, true).unwrap();
        for lambda in [0.25, 0.5, 0.75] {
            let mid = a * lambda + b * (1.0 - lambda);
            prop_assert!(f(mid) <= lambda * f(a) + (1.0 - lambda) * f(b) + 1e-10);
        }
    }

    #[test]
    fn area_objective_scales_with_polygon(seed in any::<u64>(), s in 0.01f64..100.0) {
        let (poly, mut rng) = polygon_and_rng(seed, 9);
        let center = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let x = random_interior_point(&mut rng, &poly, 1e-3);
        let scaled = poly.scale_about(center, s);
        let y = center + (x - center) * s;
        let before = area_objective(&poly, x, true).unwrap();
        let after = area_objective(&scaled, y, true).unwrap();
        prop_assert!(rel_err(after, s * before) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kmedians_partitions_and_contains_sites(seed in any::<u64>(), k in 1usize..6) {
        let (poly, _) = polygon_and_rng(seed, 8);
        let mut settings = KMediansSettings::for_polygon(&poly);
        settings.max_rounds = 5;
        let run = solve_kmedians(&poly, k, RngSeed(seed), &settings).unwrap();
        let mut state: KMediansState = KMediansState::new(&poly, run.site_trail[0].clone()).unwrap();
        for _ in 0..3 {
            state = kmedians_step(&poly, &state, &settings).unwrap();
            prop_assert!(rel_err(state.cell_area_sum(), poly.signed_area()) < 1e-9);
            for (site, cell) in state.sites.iter().zip(&state.cells) {
                if let Some(cell) = cell {
                    prop_assert_ne!(cell.contains(*site), Containment::Exterior);
                }
            }
        }
        let again = solve_kmedians(&poly, k, RngSeed(seed), &settings).unwrap();
        prop_assert_eq!(again, run);
    }
}

#[test]
fn both_modes_center_regular_polygons() {
    for n in 3..=6 {
        let center = Point::new(-0.5, 2.0);
        let poly = ConvexPolygon::regular(n, center, 2.0, 0.1).unwrap();
        let start = center + Point::new(0.3, -0.45);
        for mode in [DensityMode::UniformArcLength, DensityMode::PerEdgeEqual] {
            let r = solve_boundary(&poly, Some(start), mode, &SolveSettings::for_polygon(&poly)).unwrap();
            assert!(r.minimizer.dist(center) < 1e-7, "n={n} {mode:?}: {}", r.minimizer);
        }
    }
}

#[test]
fn solver_objectives_never_increase() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let n = rng.gen_range(3..=9);
        let poly = random_convex_polygon(&mut rng, n);
        let start = random_interior_point(&mut rng, &poly, 1e-2);
        let r = solve_boundary(&poly, Some(start), DensityMode::UniformArcLength, &SolveSettings::for_polygon(&poly))
            .unwrap();
        assert_eq!(r.iterates.len(), r.objectives.len());
        assert!(r.objectives.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        assert!(evaluate(&poly, r.minimizer, DensityMode::UniformArcLength).is_ok());
    }
}

#[test]
fn area_objective_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for p in 0..10 {
        let n = rng.gen_range(3..=9);
        let poly = random_convex_polygon(&mut rng, n);
        let xs: Vec<Point> = (0..5).map(|_| random_interior_point(&mut rng, &poly, 1e-3)).collect();
        let estimates = mc_area_means(&poly, &xs, 1_000_000, RngSeed(100 + p)).unwrap();
        for (x, mc) in xs.iter().zip(estimates) {
            let closed = area_objective(&poly, *x, true).unwrap();
            let z = (closed - mc.mean).abs() / mc.stderr.unwrap();
            assert!(z <= 4.0, "polygon {p} at {x}: closed {closed} vs MC {} (z = {z:.2})", mc.mean);
        }
    }
}

#[test]
fn monte_carlo_ignores_thread_count() {
    let poly = ConvexPolygon::regular(7, Point::new(3.0, 1.0), 2.0, 0.2).unwrap();
    let x = Point::new(3.2, 0.9);
    let with = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_area_mean(&poly, x, 300_001, RngSeed(5)).unwrap())
    };
    let one = with(1);
    assert_eq!(one, with(3));
    assert_eq!(one, with(8));
}
