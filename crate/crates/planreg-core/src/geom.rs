//! Planar geometric primitives: points, rotations, parameter boxes and the
//! minimum/maximum squared distance between a circular arc and an
//! axis-aligned rectangle.
//!
//! Distances returned by [`arc_rect_dist_min`] and [`arc_rect_dist_max`] are
//! squared Euclidean distances; every candidate is realized as an explicit
//! (arc point, rectangle point) pair and squared at the very end, so the
//! results stay directly comparable with sampled squared distances.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use libm::{atan2, cos, sin, sqrt};

pub const TAU: f64 = 2.0 * core::f64::consts::PI;

/// A planar point (also used as a free 2D vector).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        sqrt(self.norm_sq())
    }

    pub fn dist_sq(self, other: Point2) -> f64 {
        (self - other).norm_sq()
    }

    /// Angle of the vector from the origin, in `(-pi, pi]`.
    pub fn angle(self) -> f64 {
        atan2(self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn min_components(self, other: Point2) -> Point2 {
        Point2::new(self.x.min(other.x), self.y.min(other.y))
    }

    pub fn max_components(self, other: Point2) -> Point2 {
        Point2::new(self.x.max(other.x), self.y.max(other.y))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// A counter-clockwise rotation by `theta` radians.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rotation {
    pub theta: f64,
}

impl Rotation {
    pub fn new(theta: f64) -> Self {
        Rotation { theta }
    }

    /// Equivalent angle in `[0, 2*pi)`.
    pub fn normalized(self) -> Rotation {
        let mut t = self.theta % TAU;
        if t < 0.0 {
            t += TAU;
        }
        Rotation { theta: t }
    }

    pub fn apply(self, p: Point2) -> Point2 {
        let (c, s) = (cos(self.theta), sin(self.theta));
        Point2::new(c * p.x - s * p.y, s * p.x + c * p.y)
    }
}

/// An axis-aligned box in `(z_x, z_y, theta)` parameter space: the region a
/// branch-and-bound node searches.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransformBox {
    pub z_min: Point2,
    pub z_max: Point2,
    pub theta_min: f64,
    pub theta_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeomError {
    /// All three box dimensions have zero extent; there is nothing to split.
    DegenerateBox,
    /// Box bounds are inverted, non-finite, or the angular extent exceeds 2*pi.
    InvalidBox,
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::DegenerateBox => write!(f, "box is degenerate in every dimension"),
            GeomError::InvalidBox => write!(f, "invalid transform box"),
        }
    }
}

impl core::error::Error for GeomError {}

impl TransformBox {
    pub fn new(
        z_min: Point2,
        z_max: Point2,
        theta_min: f64,
        theta_max: f64,
    ) -> Result<Self, GeomError> {
        let b = TransformBox {
            z_min,
            z_max,
            theta_min,
            theta_max,
        };
        if !b.is_valid() {
            return Err(GeomError::InvalidBox);
        }
        Ok(b)
    }

    pub fn is_valid(&self) -> bool {
        self.z_min.is_finite()
            && self.z_max.is_finite()
            && self.theta_min.is_finite()
            && self.theta_max.is_finite()
            && self.z_min.x <= self.z_max.x
            && self.z_min.y <= self.z_max.y
            && self.theta_min <= self.theta_max
            && self.theta_max - self.theta_min <= TAU + 1e-12
    }

    /// Euclidean norm of the extent vector, mixing length and radian units.
    pub fn diameter(&self) -> f64 {
        let dz = self.z_max - self.z_min;
        let dt = self.theta_max - self.theta_min;
        sqrt(dz.norm_sq() + dt * dt)
    }

    pub fn center(&self) -> (Point2, f64) {
        (
            Point2::new(
                0.5 * (self.z_min.x + self.z_max.x),
                0.5 * (self.z_min.y + self.z_max.y),
            ),
            0.5 * (self.theta_min + self.theta_max),
        )
    }

    /// Extent of the largest dimension, with the angular extent scaled by
    /// `angular_scale` to make it commensurable with lengths.
    pub fn largest_dim(&self, angular_scale: f64) -> f64 {
        let dx = self.z_max.x - self.z_min.x;
        let dy = self.z_max.y - self.z_min.y;
        let dt = (self.theta_max - self.theta_min) * angular_scale;
        dx.max(dy).max(dt)
    }

    /// Bisect the dimension of maximum effective length (the angular extent
    /// is compared after multiplication by `angular_scale`). Ties go to
    /// `z_x`, then `z_y`, then `theta`.
    pub fn split(&self, angular_scale: f64) -> Result<(TransformBox, TransformBox), GeomError> {
        let dx = self.z_max.x - self.z_min.x;
        let dy = self.z_max.y - self.z_min.y;
        let dt = (self.theta_max - self.theta_min) * angular_scale;
        if dx <= 0.0 && dy <= 0.0 && dt <= 0.0 {
            return Err(GeomError::DegenerateBox);
        }
        let mut lo = *self;
        let mut hi = *self;
        if dx >= dy && dx >= dt {
            let mid = 0.5 * (self.z_min.x + self.z_max.x);
            lo.z_max.x = mid;
            hi.z_min.x = mid;
        } else if dy >= dt {
            let mid = 0.5 * (self.z_min.y + self.z_max.y);
            lo.z_max.y = mid;
            hi.z_min.y = mid;
        } else {
            let mid = 0.5 * (self.theta_min + self.theta_max);
            lo.theta_max = mid;
            hi.theta_min = mid;
        }
        Ok((lo, hi))
    }

    pub fn contains(&self, z: Point2, theta: f64) -> bool {
        self.z_min.x <= z.x
            && z.x <= self.z_max.x
            && self.z_min.y <= z.y
            && z.y <= self.z_max.y
            && self.theta_min <= theta
            && theta <= self.theta_max
    }
}

/// A circular arc centered at the origin: `{radius * (cos t, sin t) | t in
/// [theta_min, theta_max]}`. When `theta_max - theta_min >= 2*pi` the arc is
/// the full circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub radius: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

impl Arc {
    pub fn new(radius: f64, theta_min: f64, theta_max: f64) -> Self {
        Arc {
            radius,
            theta_min,
            theta_max,
        }
    }

    /// Image of source point `p` under every rotation in `[theta_min, theta_max]`.
    pub fn sweep(p: Point2, theta_min: f64, theta_max: f64) -> Self {
        let phi = p.angle();
        Arc {
            radius: p.norm(),
            theta_min: theta_min + phi,
            theta_max: theta_max + phi,
        }
    }

    pub fn width(&self) -> f64 {
        self.theta_max - self.theta_min
    }

    pub fn is_full_circle(&self) -> bool {
        self.width() >= TAU
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        Point2::new(self.radius * cos(t), self.radius * sin(t))
    }

    pub fn endpoints(&self) -> (Point2, Point2) {
        (self.point_at(self.theta_min), self.point_at(self.theta_max))
    }

    /// Whether angle `phi` (any representative) lies on the arc.
    pub fn contains_angle(&self, phi: f64) -> bool {
        if self.is_full_circle() {
            return true;
        }
        let mut a = (phi - self.theta_min) % TAU;
        if a < 0.0 {
            a += TAU;
        }
        a <= self.width()
    }

    /// Closest arc point to `v`. For `v` at the origin any arc point works;
    /// the first endpoint is returned.
    pub fn closest_point_to(&self, v: Point2) -> Point2 {
        if v.x == 0.0 && v.y == 0.0 {
            return self.point_at(self.theta_min);
        }
        let phi = v.angle();
        if self.contains_angle(phi) {
            return self.point_at(phi);
        }
        let (a, b) = self.endpoints();
        if v.dist_sq(a) <= v.dist_sq(b) {
            a
        } else {
            b
        }
    }

    /// Farthest arc point from `v` (the antipodal point on the supporting
    /// circle when it lies on the arc, otherwise an arc endpoint).
    pub fn farthest_point_from(&self, v: Point2) -> Point2 {
        let (a, b) = self.endpoints();
        let mut best = a;
        let mut best_d = v.dist_sq(a);
        let db = v.dist_sq(b);
        if db > best_d {
            best = b;
            best_d = db;
        }
        if !(v.x == 0.0 && v.y == 0.0) {
            let phi = v.angle() + core::f64::consts::PI;
            if self.contains_angle(phi) {
                let u = self.point_at(phi);
                if v.dist_sq(u) > best_d {
                    best = u;
                }
            }
        }
        best
    }
}

/// An axis-aligned rectangle; `lo == hi` is a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub lo: Point2,
    pub hi: Point2,
}

impl Rect {
    pub fn new(lo: Point2, hi: Point2) -> Self {
        Rect { lo, hi }
    }

    pub fn vertices(&self) -> [Point2; 4] {
        [
            Point2::new(self.lo.x, self.lo.y),
            Point2::new(self.hi.x, self.lo.y),
            Point2::new(self.hi.x, self.hi.y),
            Point2::new(self.lo.x, self.hi.y),
        ]
    }

    pub fn edges(&self) -> [(Point2, Point2); 4] {
        let v = self.vertices();
        [(v[0], v[1]), (v[1], v[2]), (v[2], v[3]), (v[3], v[0])]
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.lo.x <= p.x && p.x <= self.hi.x && self.lo.y <= p.y && p.y <= self.hi.y
    }

    /// Closest rectangle point to `p` (componentwise clamp).
    pub fn clamp(&self, p: Point2) -> Point2 {
        Point2::new(
            p.x.max(self.lo.x).min(self.hi.x),
            p.y.max(self.lo.y).min(self.hi.y),
        )
    }
}

fn closest_point_on_segment(a: Point2, b: Point2, p: Point2) -> Point2 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len_sq;
    let t = t.clamp(0.0, 1.0);
    a + ab * t
}

/// Whether segment `ab` meets the circle of radius `r` about the origin at a
/// parameter angle lying on `arc`.
fn segment_intersects_arc(a: Point2, b: Point2, arc: &Arc) -> bool {
    let r2 = arc.radius * arc.radius;
    let d = b - a;
    let ca = d.norm_sq();
    if ca == 0.0 {
        return a.norm_sq() == r2 && arc.contains_angle(a.angle());
    }
    let cb = 2.0 * (a.x * d.x + a.y * d.y);
    let cc = a.norm_sq() - r2;
    let disc = cb * cb - 4.0 * ca * cc;
    if disc < 0.0 {
        return false;
    }
    let sq = sqrt(disc);
    for t in [(-cb - sq) / (2.0 * ca), (-cb + sq) / (2.0 * ca)] {
        if (0.0..=1.0).contains(&t) {
            let p = a + d * t;
            if arc.contains_angle(p.angle()) {
                return true;
            }
        }
    }
    false
}

fn arc_rect_intersect(arc: &Arc, rect: &Rect) -> bool {
    // The arc is connected: either an endpoint lies in the rectangle, or the
    // arc crosses the rectangle boundary.
    let (a, b) = arc.endpoints();
    if rect.contains(a) || rect.contains(b) {
        return true;
    }
    rect.edges()
        .iter()
        .any(|&(p, q)| segment_intersects_arc(p, q, arc))
}

/// Minimum SQUARED distance between an arc centered at the origin and an
/// axis-aligned rectangle.
///
/// Candidate closest-feature pairs are enumerated explicitly: intersection
/// (distance zero), arc endpoints against the rectangle, rectangle vertices
/// against the arc, and the perpendicular foot of each edge against the arc
/// interior.
pub fn arc_rect_dist_min(arc: &Arc, rect: &Rect) -> f64 {
    if arc_rect_intersect(arc, rect) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    let (e0, e1) = arc.endpoints();
    for e in [e0, e1] {
        best = best.min(e.dist_sq(rect.clamp(e)));
    }
    for v in rect.vertices() {
        best = best.min(v.dist_sq(arc.closest_point_to(v)));
    }
    for (a, b) in rect.edges() {
        let foot = closest_point_on_segment(a, b, Point2::ZERO);
        if foot.x == 0.0 && foot.y == 0.0 {
            // Edge passes through the arc's center: every arc point is at
            // distance `radius` from it.
            best = best.min(arc.radius * arc.radius);
        } else if arc.contains_angle(foot.angle()) {
            let u = arc.point_at(foot.angle());
            best = best.min(u.dist_sq(foot));
        }
    }
    best
}

/// Maximum SQUARED distance between an arc centered at the origin and an
/// axis-aligned rectangle: the maximum over rectangle vertices of the
/// vertex-to-arc maximum distance.
pub fn arc_rect_dist_max(arc: &Arc, rect: &Rect) -> f64 {
    let mut worst: f64 = 0.0;
    for v in rect.vertices() {
        worst = worst.max(v.dist_sq(arc.farthest_point_from(v)));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn boxed(zx: (f64, f64), zy: (f64, f64), th: (f64, f64)) -> TransformBox {
        TransformBox::new(Point2::new(zx.0, zy.0), Point2::new(zx.1, zy.1), th.0, th.1).unwrap()
    }

    #[test]
    fn diameter_examples() {
        let b = boxed((1.0, 1.0), (2.0, 2.0), (0.5, 0.5));
        assert_eq!(b.diameter(), 0.0);
        let b = boxed((0.0, 3.0), (0.0, 0.0), (0.0, 4.0));
        assert_eq!(b.diameter(), 5.0);
        let b = boxed((0.0, 1.0), (0.0, 1.0), (0.0, 1.0));
        assert!((b.diameter() - 3.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn center_examples() {
        let b = boxed((0.0, 2.0), (0.0, 2.0), (0.0, PI));
        assert_eq!(b.center(), (Point2::new(1.0, 1.0), PI / 2.0));
        let b = boxed((5.0, 5.0), (-1.0, -1.0), (0.3, 0.3));
        assert_eq!(b.center(), (Point2::new(5.0, -1.0), 0.3));
        let b = boxed((-1.0, 1.0), (-1.0, 1.0), (0.0, TAU));
        assert_eq!(b.center(), (Point2::new(0.0, 0.0), PI));
    }

    #[test]
    fn split_picks_longest_dimension() {
        let b = boxed((0.0, 4.0), (0.0, 1.0), (0.0, 0.1));
        let (lo, hi) = b.split(1.0).unwrap();
        assert_eq!(lo.z_max.x, 2.0);
        assert_eq!(hi.z_min.x, 2.0);
        assert_eq!(lo.theta_max, 0.1);

        let b = boxed((0.0, 1.0), (0.0, 1.0), (0.0, PI));
        let (lo, hi) = b.split(1.0).unwrap();
        assert_eq!(lo.theta_max, PI / 2.0);
        assert_eq!(hi.theta_min, PI / 2.0);

        // scale 4 makes the unit theta extent effectively 4 > 2
        let b = boxed((0.0, 2.0), (0.0, 1.0), (0.0, 1.0));
        let (lo, _) = b.split(4.0).unwrap();
        assert_eq!(lo.theta_max, 0.5);
    }

    #[test]
    fn split_degenerate_box_errors() {
        let b = boxed((1.0, 1.0), (1.0, 1.0), (0.2, 0.2));
        assert_eq!(b.split(1.0), Err(GeomError::DegenerateBox));
    }

    #[test]
    fn split_children_shrink_diameter() {
        let b = boxed((0.0, 1.0), (0.0, 2.0), (0.0, 0.5));
        let (lo, hi) = b.split(1.0).unwrap();
        assert!(lo.diameter() < b.diameter());
        assert!(hi.diameter() < b.diameter());
    }

    #[test]
    fn dist_min_trivial_cases() {
        // full circle to its center
        let arc = Arc::new(1.0, 0.0, TAU);
        let rect = Rect::new(Point2::ZERO, Point2::ZERO);
        assert_eq!(arc_rect_dist_min(&arc, &rect), 1.0);

        // arc point (1,0) inside the rectangle
        let arc = Arc::new(1.0, 0.0, 0.1);
        let rect = Rect::new(Point2::new(0.9, -0.1), Point2::new(1.1, 0.1));
        assert_eq!(arc_rect_dist_min(&arc, &rect), 0.0);
    }

    #[test]
    fn dist_max_trivial_cases() {
        let arc = Arc::new(1.0, 0.0, TAU);
        let rect = Rect::new(Point2::new(3.0, 0.0), Point2::new(3.0, 0.0));
        assert!((arc_rect_dist_max(&arc, &rect) - 16.0).abs() < 1e-12);

        let arc = Arc::new(0.0, 0.3, 0.3);
        let rect = Rect::new(Point2::new(1.0, 1.0), Point2::new(1.0, 1.0));
        assert!((arc_rect_dist_max(&arc, &rect) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_normalization() {
        assert!((Rotation::new(-PI / 2.0).normalized().theta - 1.5 * PI).abs() < 1e-15);
        assert_eq!(Rotation::new(TAU).normalized().theta, 0.0);
    }

    #[test]
    fn contained_rectangle_inside_circle() {
        // rectangle strictly inside the circle: no intersection, min distance
        // attained at the vertex of largest norm
        let arc = Arc::new(2.0, 0.0, TAU);
        let rect = Rect::new(Point2::new(-0.5, -0.5), Point2::new(0.5, 0.5));
        let d = arc_rect_dist_min(&arc, &rect);
        let expect = (2.0 - 0.5_f64.hypot(0.5)).powi(2);
        assert!((d - expect).abs() < 1e-12, "{d} vs {expect}");
    }
}
