//! Planar convex-polygon primitives.
//!
//! Every [`ConvexPolygon`] is stored counter-clockwise, strictly convex and
//! simple. Tolerances scale with the polygon diameter so that behavior does
//! not depend on the unit of length.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for collinearity and duplicate-vertex checks.
pub const GEOM_REL_EPS: f64 = 1e-9;
/// Relative (to diameter squared) area below which a clip result is empty.
pub const AREA_REL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("vertex {0} duplicates its predecessor")]
    DuplicateVertex(usize),
    #[error("vertex {0} is collinear with its neighbors")]
    CollinearVertices(usize),
    #[error("polygon is not convex: reflex turn at vertex {0}")]
    NonConvex(usize),
    #[error("polygon is self-intersecting (boundary winds {0:.3} times)")]
    SelfIntersecting(f64),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("half-plane normal must be nonzero and finite")]
    ZeroNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    /// Panics on a non-finite coordinate; use [`Point::try_new`] for untrusted input.
    pub fn new(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "non-finite point ({x}, {y})");
        Self { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Option<Self> {
        (x.is_finite() && y.is_finite()).then_some(Self { x, y })
    }

    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2D cross product.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// `self + t * (other - self)`.
    #[inline]
    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point { x: c * self.x - s * self.y, y: s * self.x + c * self.y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point { x: self.x * s, y: self.y * s }
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point { x: -self.x, y: -self.y }
    }
}

/// `det[pi - x, pj - x]`: twice the signed area of triangle `(x, pi, pj)`.
///
/// Equals edge length times the perpendicular distance from `x` to the line
/// through the edge, positive when `x` lies left of `pi -> pj`.
#[inline]
pub fn edge_det(x: Point, pi: Point, pj: Point) -> f64 {
    (pi - x).cross(pj - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

/// `{p : <normal, p> <= offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    normal: Point,
    offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Point, offset: f64) -> Result<Self, GeomError> {
        if !(normal.is_finite() && offset.is_finite()) || normal.norm() == 0.0 {
            return Err(GeomError::ZeroNormal);
        }
        Ok(Self { normal, offset })
    }

    /// Points at least as close to `keep` as to `other`.
    pub fn bisector(keep: Point, other: Point) -> Result<Self, GeomError> {
        let normal = other - keep;
        Self::new(normal, 0.5 * (other.norm_sq() - keep.norm_sq()))
    }

    pub fn normal(&self) -> Point {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance, positive outside.
    #[inline]
    pub fn signed_dist(&self, p: Point) -> f64 {
        (self.normal.dot(p) - self.offset) / self.normal.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    diameter: f64,
}

impl ConvexPolygon {
    /// Validates and canonicalizes to counter-clockwise order.
    ///
    /// Clockwise input is reversed keeping the first vertex in place.
    /// Non-convex, self-intersecting or degenerate input is rejected.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite(i));
        }
        let diameter = diameter_of(&vertices);
        let eps = GEOM_REL_EPS * diameter;
        for i in 0..n {
            if vertices[i].dist(vertices[(i + n - 1) % n]) <= eps {
                return Err(GeomError::DuplicateVertex(i));
            }
        }
        let area2 = shoelace2(&vertices);
        if area2.abs() <= AREA_REL_EPS * diameter * diameter {
            return Err(GeomError::ZeroArea);
        }
        let mut vertices = vertices;
        if area2 < 0.0 {
            vertices[1..].reverse();
        }

        let mut winding = 0.0;
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            let (a, b) = (cur - prev, next - cur);
            // distance of `cur` from the chord prev -> next, negative if reflex
            let offset = a.cross(next - prev) / (next - prev).norm().max(f64::MIN_POSITIVE);
            if offset < -eps {
                return Err(GeomError::NonConvex(i));
            }
            if offset <= eps {
                return Err(GeomError::CollinearVertices(i));
            }
            winding += a.cross(b).atan2(a.dot(b));
        }
        let turns = winding / TAU;
        if (turns - 1.0).abs() > 1e-6 {
            return Err(GeomError::SelfIntersecting(turns));
        }
        Ok(Self { vertices, diameter })
    }

    /// Skips validation. The caller guarantees a CCW strictly convex ring.
    fn from_ccw_unchecked(vertices: Vec<Point>) -> Self {
        let diameter = diameter_of(&vertices);
        Self { vertices, diameter }
    }

    pub fn regular(n: usize, center: Point, circumradius: f64, phase: f64) -> Result<Self, GeomError> {
        let vertices =
            (0..n).map(|i| center + Point::new(circumradius, 0.0).rotate(phase + TAU * i as f64 / n as f64)).collect();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(P_i, P_{i+1})`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn eps_geom(&self) -> f64 {
        GEOM_REL_EPS * self.diameter
    }

    pub fn eps_area(&self) -> f64 {
        AREA_REL_EPS * self.diameter * self.diameter
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * shoelace2(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let origin = self.vertices[0];
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        for (p, q) in self.edges() {
            let (p, q) = (p - origin, q - origin);
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
            a2 += w;
        }
        origin + Point::new(cx, cy) * (1.0 / (3.0 * a2))
    }

    pub fn vertex_centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        let sum = self.vertices.iter().fold(Point::ORIGIN, |acc, &p| acc + p);
        sum * (1.0 / n)
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices[1..] {
            lo = Point { x: lo.x.min(p.x), y: lo.y.min(p.y) };
            hi = Point { x: hi.x.max(p.x), y: hi.y.max(p.y) };
        }
        (lo, hi)
    }

    /// Smallest signed distance from `p` to an edge line; positive inside.
    pub fn inner_distance(&self, p: Point) -> f64 {
        self.edges().map(|(a, b)| (b - a).cross(p - a) / a.dist(b)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Point) -> Containment {
        let d = self.inner_distance(p);
        let eps = self.eps_geom();
        if d > eps {
            Containment::Interior
        } else if d >= -eps {
            Containment::Boundary
        } else {
            Containment::Exterior
        }
    }

    pub fn translate(&self, by: Point) -> Self {
        Self::from_ccw_unchecked(self.vertices.iter().map(|&p| p + by).collect())
    }

    /// Rotation about the origin followed by a translation.
    pub fn rigid_motion(&self, angle: f64, by: Point) -> Self {
        Self::from_ccw_unchecked(self.vertices.iter().map(|&p| p.rotate(angle) + by).collect())
    }

    /// Homothety with positive factor about `center`.
    pub fn scale_about(&self, center: Point, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        Self::from_ccw_unchecked(self.vertices.iter().map(|&p| center + (p - center) * factor).collect())
    }

    /// Sutherland-Hodgman clip against one half-plane.
    ///
    /// Returns `None` when the remainder has area below [`ConvexPolygon::eps_area`].
    pub fn clip_halfplane(&self, h: &HalfPlane) -> Option<ConvexPolygon> {
        let eps = self.eps_geom();
        let side: Vec<f64> = self.vertices.iter().map(|&p| h.signed_dist(p)).collect();
        if side.iter().all(|&s| s <= eps) {
            return Some(self.clone());
        }
        if side.iter().all(|&s| s > eps) {
            return None;
        }

        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (p, q) = (self.vertices[i], self.vertices[j]);
            let (sp, sq) = (side[i], side[j]);
            let p_in = sp <= eps;
            let q_in = sq <= eps;
            if p_in {
                out.push(p);
            }
            if p_in != q_in {
                let t = sp / (sp - sq);
                out.push(p.lerp(q, t));
            }
        }
        let out = simplify_ring(out, eps);
        if out.len() < 3 {
            return None;
        }
        let area2 = shoelace2(&out);
        if 0.5 * area2 < self.eps_area() {
            return None;
        }
        Some(Self::from_ccw_unchecked(out))
    }
}

/// Drops near-duplicate and collinear vertices produced by clipping.
fn simplify_ring(mut ring: Vec<Point>, eps: f64) -> Vec<Point> {
    loop {
        let n = ring.len();
        if n < 3 {
            return ring;
        }
        let mut drop = None;
        for i in 0..n {
            let prev = ring[(i + n - 1) % n];
            let cur = ring[i];
            let next = ring[(i + 1) % n];
            if cur.dist(prev) <= eps {
                drop = Some(i);
                break;
            }
            let chord = next - prev;
            let len = chord.norm();
            if len <= eps || chord.cross(cur - prev).abs() / len <= eps {
                drop = Some(i);
                break;
            }
        }
        match drop {
            Some(i) => {
                ring.remove(i);
            }
            None => return ring,
        }
    }
}

fn shoelace2(vertices: &[Point]) -> f64 {
    let origin = vertices[0];
    let n = vertices.len();
    (0..n).map(|i| (vertices[i] - origin).cross(vertices[(i + 1) % n] - origin)).sum()
}

fn diameter_of(vertices: &[Point]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, &p) in vertices.iter().enumerate() {
        for &q in &vertices[i + 1..] {
            best = best.max(p.dist(q));
        }
    }
    best
}
