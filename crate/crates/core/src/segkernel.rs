//! Closed-form integrals of the distance from a point to a line segment.
//!
//! The segment from `p1` to `p2` is parametrized as `p(t) = t*p1 + (1-t)*p2`,
//! `t` in `[0, 1]`, so that
//!
//! ```text
//! |x - p(t)|^2 = alpha * (t + gamma)^2 + beta
//! alpha = |p1 - p2|^2
//! gamma = <x - p2, p2 - p1> / alpha
//! beta  = cross(x - p2, p2 - p1)^2 / alpha
//! ```
//!
//! Three integrals over `t` are provided: the mean distance, the mean inverse
//! distance and the first moment of the inverse distance. All of them are
//! evaluated without cancellation between large terms, including the
//! collinear case `beta = 0`.

use crate::error::{Error, Result};
use crate::geom::{Point, GEOM_REL_EPS};

/// `delta = beta / alpha` at or below which a point on the segment line is
/// considered to lie on the line itself.
pub const SINGULAR_REL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentFrame {
    /// Squared segment length.
    pub alpha: f64,
    /// Squared distance from the point to the segment line.
    pub beta: f64,
    /// Shift such that `t = -gamma` is the foot of the perpendicular.
    pub gamma: f64,
}

/// `int_0^1 dt / dist(t)` and `int_0^1 t dt / dist(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseDistance {
    pub c: f64,
    pub d: f64,
}

pub fn frame(x: Point, p1: Point, p2: Point) -> Result<SegmentFrame> {
    let len = p1.dist(p2);
    let scale = len.max(x.dist(p1)).max(x.dist(p2));
    if len <= GEOM_REL_EPS * scale {
        return Err(Error::DegenerateSegment { p1, p2 });
    }
    Ok(frame_unchecked(x, p1, p2))
}

/// For segments already known to be nondegenerate, such as polygon edges.
pub(crate) fn frame_unchecked(x: Point, p1: Point, p2: Point) -> SegmentFrame {
    let e = p2 - p1;
    let r = x - p2;
    let alpha = e.norm_sq();
    let gamma = r.dot(e) / alpha;
    // Lagrange identity: |r|^2 |e|^2 - <r,e>^2 = cross(r,e)^2, never negative
    let cross = r.cross(e);
    let beta = (cross * cross / alpha).max(0.0);
    SegmentFrame { alpha, beta, gamma }
}

impl SegmentFrame {
    pub fn delta(&self) -> f64 {
        self.beta / self.alpha
    }

    pub fn dist_sq(&self, t: f64) -> f64 {
        let s = t + self.gamma;
        self.alpha * s * s + self.beta
    }

    /// `int_0^1 dist(t) dt`.
    pub fn mean_distance(&self) -> f64 {
        let delta = self.delta();
        let (a, b) = (1.0 + self.gamma, self.gamma);
        let s1 = (a * a + delta).sqrt();
        let s0 = (b * b + delta).sqrt();
        let radial = if a * b >= 0.0 && a * s1 + b * s0 != 0.0 {
            // a*s1 - b*s0 with a^2 - b^2 = 1 + 2*gamma factored out
            (1.0 + 2.0 * self.gamma) * (a * a + b * b + delta) / (a * s1 + b * s0)
        } else {
            a * s1 - b * s0
        };
        let log_part = if delta == 0.0 { 0.0 } else { delta * asinh_diff(a, b, delta) };
        0.5 * self.alpha.sqrt() * (radial + log_part)
    }

    pub fn inverse_distance(&self) -> Result<InverseDistance> {
        let delta = self.delta();
        let (a, b) = (1.0 + self.gamma, self.gamma);
        let eps = SINGULAR_REL_EPS;
        if delta <= eps && b <= eps && a >= -eps {
            return Err(Error::SingularPoint(Point::ORIGIN));
        }
        let s1 = (a * a + delta).sqrt();
        let s0 = (b * b + delta).sqrt();
        let log = if delta == 0.0 {
            // collinear, off the segment: int dt / |t + gamma|
            (a.abs() / b.abs()).ln().abs()
        } else {
            asinh_diff(a, b, delta)
        };
        let sqrt_alpha = self.alpha.sqrt();
        let d = log / sqrt_alpha;
        let c = ((1.0 + 2.0 * self.gamma) / (s1 + s0) - self.gamma * log) / sqrt_alpha;
        Ok(InverseDistance { c, d })
    }
}

/// `asinh(a / sqrt(delta)) - asinh(b / sqrt(delta))` for `a = b + 1`, `delta >= 0`.
///
/// Infinite when `delta = 0` and `0` lies in `[b, a]`.
fn asinh_diff(a: f64, b: f64, delta: f64) -> f64 {
    if b >= 0.0 {
        same_side_diff(a, b, delta)
    } else if a <= 0.0 {
        same_side_diff(-b, -a, delta)
    } else {
        // straddling zero: both terms positive
        ((a + (a * a + delta).sqrt()) * (-b + (b * b + delta).sqrt())).ln() - delta.ln()
    }
}

/// `asinh(hi/r) - asinh(lo/r)` for `hi = lo + 1`, `lo >= 0`, `r = sqrt(delta)`.
fn same_side_diff(hi: f64, lo: f64, delta: f64) -> f64 {
    let s_hi = (hi * hi + delta).sqrt();
    let s_lo = (lo * lo + delta).sqrt();
    let num = (hi - lo) + (hi - lo) * (hi + lo) / (s_hi + s_lo);
    (num / (lo + s_lo)).ln_1p()
}

/// Antiderivative of `sqrt(alpha t^2 + beta)` for `alpha, beta > 0`.
pub fn sqrt_quadratic_antideriv(alpha: f64, beta: f64, t: f64) -> f64 {
    0.5 * t * (alpha * t * t + beta).sqrt() + beta / (2.0 * alpha.sqrt()) * (t * (alpha / beta).sqrt()).asinh()
}

/// Antiderivative of `1 / sqrt(t^2 + delta)` for `delta > 0`.
pub fn inverse_antideriv(delta: f64, t: f64) -> f64 {
    (t / delta.sqrt()).asinh()
}

/// Antiderivative of `t / sqrt((t + shift)^2 + delta)` for `delta > 0`.
pub fn moment_antideriv(shift: f64, delta: f64, t: f64) -> f64 {
    let u = t + shift;
    (u * u + delta).sqrt() - shift * (u / delta.sqrt()).asinh()
}

/// Mean distance from `x` to the segment `p1 p2`.
pub fn avg_dist_segment(x: Point, p1: Point, p2: Point) -> Result<f64> {
    Ok(frame(x, p1, p2)?.mean_distance())
}

/// `(c, d)` for `x` against the segment `p1 p2`; errors if `x` is on it.
pub fn inv_dist_integrals(x: Point, p1: Point, p2: Point) -> Result<InverseDistance> {
    frame(x, p1, p2)?.inverse_distance().map_err(|e| match e {
        Error::SingularPoint(_) => Error::SingularPoint(x),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn frame_examples() {
        let f = frame(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)).unwrap();
        assert_eq!((f.alpha, f.beta, f.gamma), (2.0, 0.5, -0.5));

        let f = frame(p(0.0, 1.0), p(1.0, 0.0), p(0.0, 1.0)).unwrap();
        assert_eq!((f.beta, f.gamma), (0.0, 0.0));

        // dist(t) = |x - (1 - t, 0)| = 1 + t, so the shift is +1
        let f = frame(p(2.0, 0.0), p(0.0, 0.0), p(1.0, 0.0)).unwrap();
        assert_eq!((f.alpha, f.beta, f.gamma), (1.0, 0.0, 1.0));
    }

    #[test]
    fn frame_reproduces_distance() {
        let (x, p1, p2) = (p(0.3, -1.7), p(2.0, 0.5), p(-1.0, 0.25));
        let f = frame(x, p1, p2).unwrap();
        for t in [0.0, 0.5, 1.0] {
            let direct = (x - (p1 * t + p2 * (1.0 - t))).norm_sq();
            assert!(rel(f.dist_sq(t), direct) < 1e-10);
        }
    }

    #[test]
    fn degenerate_segment() {
        assert!(matches!(frame(p(1.0, 1.0), p(0.0, 0.0), p(0.0, 0.0)), Err(Error::DegenerateSegment { .. })));
        assert!(matches!(frame(p(1.0, 1.0), p(0.0, 0.0), p(1e-12, 0.0)), Err(Error::DegenerateSegment { .. })));
    }

    #[test]
    fn sqrt_quadratic_values() {
        assert_eq!(sqrt_quadratic_antideriv(1.0, 1.0, 0.0), 0.0);
        let v = sqrt_quadratic_antideriv(1.0, 1.0, 1.0);
        assert!((v - 1.147_793_574_696_319).abs() < 1e-14);
    }

    #[test]
    fn mean_distance_examples() {
        let f = avg_dist_segment(p(0.0, 0.0), p(-1.0, 1.0), p(1.0, 1.0)).unwrap();
        assert!((f - 1.147_793_574_696_319).abs() < 1e-14);
        assert_eq!(avg_dist_segment(p(2.0, 0.0), p(0.0, 0.0), p(1.0, 0.0)).unwrap(), 1.5);
        let f = avg_dist_segment(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)).unwrap();
        assert!((f - 0.811_612_620_070_115_3).abs() < 1e-14);
    }

    #[test]
    fn endpoint_is_half_length() {
        let (p1, p2) = (p(0.3, -0.4), p(2.1, 1.7));
        let f = avg_dist_segment(p2, p1, p2).unwrap();
        assert!(rel(f, 0.5 * p1.dist(p2)) < 1e-14);
        let f = avg_dist_segment(p1, p1, p2).unwrap();
        assert!(rel(f, 0.5 * p1.dist(p2)) < 1e-14);
    }

    #[test]
    fn inverse_distance_examples() {
        let InverseDistance { c, d } = inv_dist_integrals(p(0.0, 0.0), p(-1.0, 1.0), p(1.0, 1.0)).unwrap();
        assert!((d - 1f64.asinh()).abs() < 1e-15);
        assert!((c - 0.5 * d).abs() < 1e-15);

        let InverseDistance { c, d } = inv_dist_integrals(p(2.0, 0.0), p(0.0, 0.0), p(1.0, 0.0)).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-15);
        // int_0^1 t / (1 + t) dt = 1 - ln 2
        assert!((c - (1.0 - 2f64.ln())).abs() < 1e-15);

        // collinear beyond the other end: dist(t) = 2 - t ... with p1 = (1,0)
        let InverseDistance { c, d } = inv_dist_integrals(p(-1.0, 0.0), p(1.0, 0.0), p(0.0, 0.0)).unwrap();
        // dist(t) = 1 + t again, mirrored
        assert!((d - 2f64.ln()).abs() < 1e-15);
        assert!((c - (1.0 - 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn on_segment_is_singular() {
        for x in [p(0.5, 0.0), p(0.0, 0.0), p(1.0, 0.0)] {
            assert_eq!(inv_dist_integrals(x, p(0.0, 0.0), p(1.0, 0.0)), Err(Error::SingularPoint(x)));
        }
        assert!(inv_dist_integrals(p(0.5, 1e-3), p(0.0, 0.0), p(1.0, 0.0)).is_ok());
    }

    #[test]
    fn far_point_keeps_precision() {
        // X 1e4 segment lengths away along the line and slightly off it
        let (x, p1, p2) = (p(1e4, 1e-3), p(0.0, 0.0), p(1.0, 0.0));
        let f = avg_dist_segment(x, p1, p2).unwrap();
        let mid = (x - p(0.5, 0.0)).norm();
        // mean of a nearly linear distance equals the midpoint distance to O(1/D)
        assert!(rel(f, mid) < 1e-8);
        let InverseDistance { c, d } = inv_dist_integrals(x, p1, p2).unwrap();
        assert!(rel(d, 1.0 / mid) < 1e-8);
        assert!((c / d - 0.5).abs() < 1e-4);
    }
}
