//! Planar points, triangles, barycentric coordinates and the triangle
//! shape functional used to pick a node's triangle.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Relative area threshold below which a triangle counts as degenerate:
/// `|det| <= DEGENERACY_TOL * r^2`.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub v: [Point; 3],
}

impl Triangle {
    pub fn new(v1: Point, v2: Point, v3: Point) -> Self {
        Self { v: [v1, v2, v3] }
    }

    /// Determinant of the homogeneous vertex matrix, i.e. twice the
    /// oriented geometric area.
    pub fn signed_area(&self) -> f64 {
        det3(self.v[0], self.v[1], self.v[2])
    }

    pub fn longest_side(&self) -> f64 {
        let [a, b, c] = self.v;
        a.dist(b).max(b.dist(c)).max(c.dist(a))
    }

    pub fn is_degenerate(&self) -> bool {
        let r = self.longest_side();
        !(self.signed_area().abs() > DEGENERACY_TOL * r * r)
    }

    /// Shape functional `r^3 / |det|`; `+inf` for degenerate triangles.
    pub fn quality(&self) -> f64 {
        if self.is_degenerate() {
            return f64::INFINITY;
        }
        let r = self.longest_side();
        r * r * r / self.signed_area().abs()
    }

    pub fn barycentric(&self, p: Point) -> Result<[f64; 3]> {
        if self.is_degenerate() {
            return Err(Error::Geometry(format!(
                "triangle {:?} has (near) zero area",
                self.v
            )));
        }
        Ok(self.barycentric_unchecked(p))
    }

    pub(crate) fn barycentric_unchecked(&self, p: Point) -> [f64; 3] {
        let [a, b, c] = self.v;
        let area = self.signed_area();
        let l2 = det3(a, p, c) / area;
        let l3 = det3(a, b, p) / area;
        [det3(p, b, c) / area, l2, l3]
    }

    pub fn centroid(&self) -> Point {
        let [a, b, c] = self.v;
        Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }
}

#[inline]
fn det3(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)
}
