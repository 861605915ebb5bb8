//! Planar geometry: points, circles, regular hexagons and circle intersections.
//!
//! All lengths are in meters. Comparisons use a relative tolerance of
//! [`REL_TOL`] scaled by the magnitude of the operands (floored at one meter).

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REL_TOL: f64 = 1e-9;

const SIN_60: f64 = 0.866_025_403_784_438_6;
const COS_TABLE: [f64; 6] = [1.0, 0.5, -0.5, -1.0, -0.5, 0.5];
const SIN_TABLE: [f64; 6] = [0.0, SIN_60, SIN_60, 0.0, -SIN_60, -SIN_60];

/// Tolerance for quantities of magnitude `scale`.
#[inline]
pub fn tol(scale: f64) -> f64 {
    REL_TOL * scale.abs().max(1.0)
}

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= tol(a.abs().max(b.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2D) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point2D) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2D) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Counter-clockwise normal of the same length.
    pub fn perp(self) -> Point2D {
        Point2D::new(-self.y, self.x)
    }

    pub fn lerp(self, other: Point2D, t: f64) -> Point2D {
        self + (other - self) * t
    }

    pub fn midpoint(self, other: Point2D) -> Point2D {
        Point2D::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Unit vector in the same direction, `None` for the zero vector.
    pub fn normalized(self) -> Option<Point2D> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    /// Moves `distance` from `self` towards `target`, stopping at `target`.
    pub fn step_towards(self, target: Point2D, distance: f64) -> Point2D {
        let d = self.distance(target);
        if d <= distance || d == 0.0 {
            target
        } else {
            self.lerp(target, distance / d)
        }
    }

    pub fn approx_eq(self, other: Point2D) -> bool {
        let scale = self
            .x
            .abs()
            .max(self.y.abs())
            .max(other.x.abs())
            .max(other.y.abs());
        self.distance(other) <= tol(scale)
    }
}

impl Add for Point2D {
    type Output = Point2D;
    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2D {
    type Output = Point2D;
    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2D {
    type Output = Point2D;
    fn mul(self, rhs: f64) -> Point2D {
        Point2D::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2D {
    type Output = Point2D;
    fn neg(self) -> Point2D {
        Point2D::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point2D {
    fn from((x, y): (f64, f64)) -> Self {
        Point2D::new(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2D,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2D, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(crate::error::invalid(
                "circle radius must be positive and finite",
            ));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, p: Point2D) -> bool {
        self.center.distance(p) <= self.radius + tol(self.radius)
    }

    /// Point of the circle nearest to `p`. For `p` at the center the
    /// point in the +x direction is returned.
    pub fn closest_point(&self, p: Point2D) -> Point2D {
        let dir = (p - self.center)
            .normalized()
            .unwrap_or(Point2D::new(1.0, 0.0));
        self.center + dir * self.radius
    }
}

/// Regular hexagon given by its center and six counter-clockwise vertices.
///
/// Used both for the largest regular hexagon inscribed in a communication
/// circle (circumradius equal to the range, so every side also equals the
/// range) and for the larger coverage hexagons of the region planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lrh {
    pub center: Point2D,
    pub circumradius: f64,
    pub vertices: [Point2D; 6],
}

impl Lrh {
    /// Hexagon with `vertex_on_circle` as its first vertex.
    pub fn from_vertex(center: Point2D, vertex_on_circle: Point2D) -> Result<Self> {
        lrh_from_vertex(center, vertex_on_circle)
    }

    /// Hexagon whose first vertex sits at angle `theta` (radians) from +x.
    pub fn with_orientation(center: Point2D, circumradius: f64, theta: f64) -> Result<Self> {
        let (s, c) = theta.sin_cos();
        lrh_from_vertex(center, center + Point2D::new(c, s) * circumradius)
    }

    pub fn side_length(&self) -> f64 {
        self.circumradius
    }

    pub fn perimeter(&self) -> f64 {
        6.0 * self.circumradius
    }

    /// Vertices followed by the first vertex again.
    pub fn closed_polyline(&self) -> Vec<Point2D> {
        let mut pts = self.vertices.to_vec();
        pts.push(self.vertices[0]);
        pts
    }

    pub fn contains(&self, p: Point2D) -> bool {
        point_in_hexagon(p, self)
    }

    /// Same hexagon, traversed starting from vertex `start`.
    pub fn rotated_start(&self, start: usize) -> Lrh {
        let mut vertices = self.vertices;
        vertices.rotate_left(start % 6);
        Lrh { vertices, ..*self }
    }

    /// Index of the vertex nearest to `p` (lowest index on ties).
    pub fn nearest_vertex(&self, p: Point2D) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, v) in self.vertices.iter().enumerate() {
            let d = v.distance(p);
            if d < best_d - tol(best_d.min(1e12)) {
                best = i;
                best_d = d;
            }
        }
        best
    }
}

pub fn lrh_from_vertex(center: Point2D, vertex_on_circle: Point2D) -> Result<Lrh> {
    let spoke = vertex_on_circle - center;
    let radius = spoke.norm();
    if !radius.is_finite() || radius <= tol(center.x.abs().max(center.y.abs())) {
        return Err(Error::DegenerateHexagon);
    }
    let mut vertices = [vertex_on_circle; 6];
    for k in 1..6 {
        let (c, s) = (COS_TABLE[k], SIN_TABLE[k]);
        vertices[k] = center + Point2D::new(spoke.x * c - spoke.y * s, spoke.x * s + spoke.y * c);
    }
    Ok(Lrh {
        center,
        circumradius: radius,
        vertices,
    })
}

/// Real intersection points of two circles.
///
/// Two points come back ordered by descending y, then descending x.
/// Tangent circles yield exactly one point.
pub fn circle_circle_intersections(a: &Circle, b: &Circle) -> Result<Vec<Point2D>> {
    let delta = b.center - a.center;
    let d = delta.norm();
    let scale = a.radius.max(b.radius).max(d);
    let eps = tol(scale);

    if d <= eps {
        if (a.radius - b.radius).abs() <= eps {
            return Err(Error::CoincidentCircles);
        }
        return Ok(Vec::new());
    }

    let outer = a.radius + b.radius;
    let inner = (a.radius - b.radius).abs();
    if d > outer + eps || d < inner - eps {
        return Ok(Vec::new());
    }

    let e = delta * (1.0 / d);
    let along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    if (d - outer).abs() <= eps || (d - inner).abs() <= eps {
        let along = along.clamp(-a.radius, a.radius);
        return Ok(vec![a.center + e * along]);
    }

    let h = (a.radius * a.radius - along * along).max(0.0).sqrt();
    let base = a.center + e * along;
    let n = e.perp();
    let mut pts = vec![base + n * h, base - n * h];
    sort_desc_yx(&mut pts);
    Ok(pts)
}

fn sort_desc_yx(pts: &mut [Point2D]) {
    pts.sort_by(|p, q| {
        let scale = p.y.abs().max(q.y.abs());
        if (p.y - q.y).abs() <= tol(scale) {
            q.x.total_cmp(&p.x)
        } else {
            q.y.total_cmp(&p.y)
        }
    });
}

/// True iff `p` lies inside or on the boundary of `h`.
pub fn point_in_hexagon(p: Point2D, h: &Lrh) -> bool {
    let eps = tol(h.circumradius) * h.circumradius.max(1.0);
    (0..6).all(|i| {
        let a = h.vertices[i];
        let b = h.vertices[(i + 1) % 6];
        (b - a).cross(p - a) >= -eps
    })
}

pub fn polyline_length(points: &[Point2D]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyPolyline);
    }
    Ok(points.windows(2).map(|w| w[0].distance(w[1])).sum())
}
