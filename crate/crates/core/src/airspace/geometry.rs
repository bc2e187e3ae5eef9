//! Planar geometry used by corridor volumes: points, convex polygons and
//! convex clipping.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

/// Overlaps thinner than this (in square meters) are treated as touching,
/// not intersecting.
pub const AREA_EPS: f64 = 1e-6;

/// A point (or vector) in the local east/north frame, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn from_polar(radius: f64, angle: f64) -> Point {
        Point::new(radius * angle.cos(), radius * angle.sin())
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl From<[f64; 2]> for Point {
    fn from(p: [f64; 2]) -> Self {
        Point::new(p[0], p[1])
    }
}

/// Closest point to `p` on segment `a..b`, with its parameter in `[0, 1]`.
pub fn closest_on_segment(p: Point, a: Point, b: Point) -> (Point, f64) {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return (a, 0.0);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (a + ab * t, t)
}

/// Convex polygon with counter-clockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Caller guarantees convexity; orientation is normalized to CCW.
    pub fn new(mut vertices: Vec<Point>) -> Self {
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Self { vertices }
    }

    /// Rectangle swept by a segment with the given half-width (flat ends).
    pub fn swept_segment(a: Point, b: Point, half_width: f64) -> Self {
        let dir = (b - a) * (1.0 / (b - a).norm());
        let n = dir.perp() * half_width;
        Self::new(vec![a - n, b - n, b + n, a + n])
    }

    /// Regular polygon inscribed in a circle.
    pub fn regular(center: Point, radius: f64, sides: usize) -> Self {
        let step = std::f64::consts::TAU / sides as f64;
        let vertices = (0..sides)
            .map(|k| center + Point::from_polar(radius, step * k as f64))
            .collect();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    pub fn centroid(&self) -> Point {
        let v = &self.vertices;
        let a = signed_area(v);
        if a.abs() < f64::EPSILON {
            let n = v.len().max(1) as f64;
            let s = v.iter().fold(Point::default(), |acc, p| acc + *p);
            return s * (1.0 / n);
        }
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..v.len() {
            let p = v[i];
            let q = v[(i + 1) % v.len()];
            let c = p.cross(q);
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(cx / (6.0 * a), cy / (6.0 * a))
    }

    /// Closed point-in-polygon test.
    pub fn contains(&self, p: Point) -> bool {
        let v = &self.vertices;
        (0..v.len()).all(|i| (v[(i + 1) % v.len()] - v[i]).cross(p - v[i]) >= -1e-9)
    }

    /// Axis-aligned bounds `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        self.vertices.iter().fold(
            (
                Point::new(f64::INFINITY, f64::INFINITY),
                Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
            ),
            |(lo, hi), p| {
                (
                    Point::new(lo.x.min(p.x), lo.y.min(p.y)),
                    Point::new(hi.x.max(p.x), hi.y.max(p.y)),
                )
            },
        )
    }

    /// Intersection of two convex polygons (Sutherland-Hodgman). Returns
    /// `None` when the shared area is below [`AREA_EPS`].
    pub fn intersection(&self, clip: &ConvexPolygon) -> Option<ConvexPolygon> {
        let mut output = self.vertices.clone();
        let c = &clip.vertices;
        for i in 0..c.len() {
            if output.is_empty() {
                return None;
            }
            let a = c[i];
            let b = c[(i + 1) % c.len()];
            let edge = b - a;
            let input = std::mem::take(&mut output);
            for j in 0..input.len() {
                let p = input[j];
                let q = input[(j + 1) % input.len()];
                let dp = edge.cross(p - a);
                let dq = edge.cross(q - a);
                if dp >= 0.0 {
                    output.push(p);
                }
                if (dp >= 0.0) != (dq >= 0.0) {
                    let t = dp / (dp - dq);
                    output.push(p + (q - p) * t);
                }
            }
        }
        let poly = ConvexPolygon { vertices: output };
        (poly.vertices.len() >= 3 && poly.area() > AREA_EPS).then_some(poly)
    }
}

fn signed_area(v: &[Point]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        s += v[i].cross(v[(i + 1) % v.len()]);
    }
    s / 2.0
}

fn bounds_overlap(a: (Point, Point), b: (Point, Point)) -> bool {
    a.0.x <= b.1.x && b.0.x <= a.1.x && a.0.y <= b.1.y && b.0.y <= a.1.y
}

/// Shared region of two unions of convex pieces, as a list of convex pieces.
pub fn union_overlap(a: &[ConvexPolygon], b: &[ConvexPolygon]) -> Vec<ConvexPolygon> {
    let mut out = Vec::new();
    for pa in a {
        let ba = pa.bounds();
        for pb in b {
            if !bounds_overlap(ba, pb.bounds()) {
                continue;
            }
            if let Some(p) = pa.intersection(pb) {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: f64, y0: f64, side: f64) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(x0, y0),
            Point::new(x0 + side, y0),
            Point::new(x0 + side, y0 + side),
            Point::new(x0, y0 + side),
        ])
    }

    #[test]
    fn overlapping_squares_clip_to_quarter() {
        let a = square(0.0, 0.0, 2.0);
        let b = square(1.0, 1.0, 2.0);
        let c = a.intersection(&b).unwrap();
        assert!((c.area() - 1.0).abs() < 1e-12);
        let m = c.centroid();
        assert!((m.x - 1.5).abs() < 1e-12 && (m.y - 1.5).abs() < 1e-12);
    }

    #[test]
    fn edge_contact_is_not_overlap() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(1.0, 0.0, 1.0);
        assert!(a.intersection(&b).is_none());
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let cw = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ]);
        assert!((cw.area() - 1.0).abs() < 1e-12);
        assert!(cw.intersection(&square(0.5, 0.5, 1.0)).is_some());
    }

    #[test]
    fn closest_point_clamps_to_segment() {
        let (p, t) = closest_on_segment(Point::new(-3.0, 4.0), Point::new(0.0, 0.0), Point::new(10.0, 0.0));
        assert_eq!(t, 0.0);
        assert_eq!(p, Point::new(0.0, 0.0));
        let (p, t) = closest_on_segment(Point::new(5.0, 4.0), Point::new(0.0, 0.0), Point::new(10.0, 0.0));
        assert!((t - 0.5).abs() < 1e-12);
        assert_eq!(p, Point::new(5.0, 0.0));
    }
}
