//! Brute-force estimators used to check the closed forms.
//!
//! Nothing here calls into `segkernel`, `boundary` or `area`; only polygon
//! plumbing from `geom` is shared. Monte Carlo streams come from ChaCha8
//! with one stream per block of [`MC_BLOCK`] samples, so results do not
//! depend on how many worker threads consume the blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Containment, ConvexPolygon, Point};

/// Samples per independent ChaCha8 stream.
pub const MC_BLOCK: u64 = 1 << 16;
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), stream per 65536-sample block";

const SIMPSON_MAX_DEPTH: u32 = 48;
const SIMPSON_PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn stream(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let h = (b - a) / SIMPSON_PANELS as f64;
    let panel_tol = tol / SIMPSON_PANELS as f64;
    (0..SIMPSON_PANELS)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == SIMPSON_PANELS { b } else { lo + h };
            let mid = 0.5 * (lo + hi);
            let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson_step(&f, lo, hi, flo, fmid, fhi, whole, panel_tol, SIMPSON_MAX_DEPTH)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Past the rounding floor further halving only amplifies noise.
    let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= (15.0 * tol).max(floor) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Mean of `|x - (t p1 + (1-t) p2)|` over `t` in `[0, 1]` by quadrature.
pub fn quad_segment_mean(x: Point, p1: Point, p2: Point, tol: f64) -> f64 {
    adaptive_simpson(|t| (x - (p1 * t + p2 * (1.0 - t))).norm(), 0.0, 1.0, tol)
}

/// Uniform sampler over a convex polygon: area-weighted fan triangle, then
/// a folded barycentric draw inside it.
#[derive(Debug, Clone)]
pub struct PolygonSampler {
    // (apex, edge1, edge2) per fan triangle
    triangles: Vec<(Point, Point, Point)>,
    cumulative: Vec<f64>,
}

impl PolygonSampler {
    pub fn new(poly: &ConvexPolygon) -> Self {
        let v = poly.vertices();
        let apex = v[0];
        let mut triangles = Vec::with_capacity(v.len() - 2);
        let mut cumulative = Vec::with_capacity(v.len() - 2);
        let mut total = 0.0;
        for w in v[1..].windows(2) {
            let (e1, e2) = (w[0] - apex, w[1] - apex);
            total += 0.5 * e1.cross(e2);
            triangles.push((apex, e1, e2));
            cumulative.push(total);
        }
        for c in &mut cumulative {
            *c /= total;
        }
        Self { triangles, cumulative }
    }

    /// `(triangle, r1, r2)` with the sample at `apex + r1 e1 + r2 e2`.
    fn draw<R: Rng>(&self, rng: &mut R) -> (usize, f64, f64) {
        let u: f64 = rng.gen();
        let mut r1: f64 = rng.gen();
        let mut r2: f64 = rng.gen();
        let tri = self.cumulative.partition_point(|&c| c <= u).min(self.triangles.len() - 1);
        if r1 + r2 > 1.0 {
            r1 = 1.0 - r1;
            r2 = 1.0 - r2;
        }
        (tri, r1, r2)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        let (tri, r1, r2) = self.draw(rng);
        let (apex, e1, e2) = self.triangles[tri];
        apex + e1 * r1 + e2 * r2
    }

    /// Distance from `x` to a drawn sample, formed from edge offsets so that
    /// translating polygon and point together leaves it unchanged.
    fn sample_distance(&self, x: Point, draw: (usize, f64, f64)) -> f64 {
        let (tri, r1, r2) = draw;
        let (apex, e1, e2) = self.triangles[tri];
        ((x - apex) - e1 * r1 - e2 * r2).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Absent for a single sample.
    pub stderr: Option<f64>,
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.count += 1;
        let d = v - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments { count, mean: self.mean + d * w, m2: self.m2 + other.m2 + d * d * self.count as f64 * w }
    }

    fn estimate(self) -> McEstimate {
        let stderr = (self.count > 1).then(|| (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt());
        McEstimate { mean: self.mean, stderr, samples: self.count }
    }
}

/// Monte Carlo mean of `|x - U|` for `U` uniform in `poly`.
pub fn mc_area_mean(poly: &ConvexPolygon, x: Point, n: u64, seed: RngSeed) -> Result<McEstimate> {
    Ok(mc_area_means(poly, &[x], n, seed)?[0])
}

/// Same sample stream shared by every query point.
pub fn mc_area_means(poly: &ConvexPolygon, xs: &[Point], n: u64, seed: RngSeed) -> Result<Vec<McEstimate>> {
    if n == 0 {
        return Err(Error::InvalidSetting("sample count must be at least 1"));
    }
    let sampler = PolygonSampler::new(poly);
    let blocks = n.div_ceil(MC_BLOCK);
    let partial: Vec<Vec<Moments>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = seed.stream(b);
            let len = MC_BLOCK.min(n - b * MC_BLOCK);
            let mut acc = vec![Moments::default(); xs.len()];
            for _ in 0..len {
                let draw = sampler.draw(&mut rng);
                for (m, &x) in acc.iter_mut().zip(xs) {
                    m.push(sampler.sample_distance(x, draw));
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Moments::default(); xs.len()];
    for block in partial {
        for (t, m) in total.iter_mut().zip(block) {
            *t = t.merge(m);
        }
    }
    Ok(total.into_iter().map(Moments::estimate).collect())
}

/// Arc-length mean of `|x - xi|` over the boundary by the midpoint rule.
///
/// `m` points are split among edges in proportion to length (largest
/// remainder, at least one per edge); each point carries the length of its
/// sub-segment as weight.
pub fn boundary_mean_sampled(poly: &ConvexPolygon, x: Point, m: usize) -> Result<f64> {
    let n = poly.len();
    if m < n {
        return Err(Error::InvalidSetting("need at least one boundary sample per edge"));
    }
    let lengths: Vec<f64> = poly.edges().map(|(a, b)| a.dist(b)).collect();
    let perimeter: f64 = lengths.iter().sum();
    let spare = (m - n) as f64;
    let shares: Vec<f64> = lengths.iter().map(|l| spare * l / perimeter).collect();
    let mut counts: Vec<usize> = shares.iter().map(|s| 1 + s.floor() as usize).collect();
    let mut leftover = m - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (fi, fj) = (shares[i].fract(), shares[j].fract());
        fj.total_cmp(&fi).then(i.cmp(&j))
    });
    for &i in order.iter().cycle() {
        if leftover == 0 {
            break;
        }
        counts[i] += 1;
        leftover -= 1;
    }

    let mut total = 0.0;
    for ((a, b), (&count, &len)) in poly.edges().zip(counts.iter().zip(&lengths)) {
        let h = 1.0 / count as f64;
        let s: f64 = (0..count).map(|j| x.dist(a.lerp(b, (j as f64 + 0.5) * h))).sum();
        total += s * len * h;
    }
    Ok(total / perimeter)
}

/// Exhaustive grid minimum over the polygon's bounding box.
pub fn grid_min<F>(poly: &ConvexPolygon, objective: F, resolution: f64) -> Result<Point>
where
    F: Fn(Point) -> f64 + Sync,
{
    let (lo, hi) = poly.bounds();
    grid_min_in(poly, (lo, hi), objective, resolution)
}

/// Grid minimum restricted to the window `(lo, hi)`, followed by three
/// rounds of 3x3 pattern refinement at spacings `resolution / 2, 4, 8`.
pub fn grid_min_in<F>(poly: &ConvexPolygon, window: (Point, Point), objective: F, resolution: f64) -> Result<Point>
where
    F: Fn(Point) -> f64 + Sync,
{
    if !(resolution > 0.0) {
        return Err(Error::InvalidSetting("grid resolution must be positive"));
    }
    let (lo, hi) = window;
    let nx = ((hi.x - lo.x) / resolution).floor() as usize;
    let ny = ((hi.y - lo.y) / resolution).floor() as usize;
    if nx == 0 || ny == 0 {
        return Err(Error::EmptyGrid { resolution });
    }
    let score = |p: Point| {
        if poly.contains(p) != Containment::Interior {
            return f64::INFINITY;
        }
        let v = objective(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let (mx, my) = ((hi.x - lo.x - nx as f64 * resolution) / 2.0, (hi.y - lo.y - ny as f64 * resolution) / 2.0);
    let best = (0..ny)
        .into_par_iter()
        .map(|j| {
            let y = lo.y + my + (j as f64 + 0.5) * resolution;
            (0..nx)
                .map(|i| {
                    let p = Point { x: lo.x + mx + (i as f64 + 0.5) * resolution, y };
                    (score(p), j * nx + i, p)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                .expect("nx > 0")
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("ny > 0");
    if !best.0.is_finite() {
        return Err(Error::EmptyGrid { resolution });
    }

    let (mut at, mut value) = (best.2, best.0);
    let mut h = resolution;
    for _ in 0..3 {
        h *= 0.5;
        for _ in 0..64 {
            let mut moved = false;
            for dy in [-1.0, 0.0, 1.0] {
                for dx in [-1.0, 0.0, 1.0] {
                    let p = Point { x: at.x + dx * h, y: at.y + dy * h };
                    let v = score(p);
                    if v < value {
                        (at, value) = (p, v);
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
    }
    Ok(at)
}

/// Coarse-to-fine grid search ending at `resolution`.
///
/// Each level searches a window of eight coarse cells around the previous
/// best. Correct for objectives with a single basin, such as convex ones.
pub fn grid_min_zoom<F>(poly: &ConvexPolygon, objective: F, resolution: f64) -> Result<Point>
where
    F: Fn(Point) -> f64 + Sync,
{
    let coarse = (poly.diameter() / 64.0).max(resolution);
    let mut best = grid_min(poly, &objective, coarse)?;
    let mut res = coarse;
    while res > resolution {
        let half = 4.0 * res;
        res = (res / 8.0).max(resolution);
        let window = (Point { x: best.x - half, y: best.y - half }, Point { x: best.x + half, y: best.y + half });
        best = grid_min_in(poly, window, &objective, res)?;
    }
    Ok(best)
}
