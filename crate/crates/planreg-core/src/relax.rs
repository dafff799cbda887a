//! The relaxation lower bound: linearize each squared-distance function at
//! the box center, enclose the rotation arc in an isosceles trapezoid in
//! `(cos, sin)` space, and minimize the resulting concave surrogate over the
//! vertices of the translation-box x trapezoid polytope.

use alloc::vec::Vec;
use core::fmt;

use libm::{cos, sin};

use crate::geom::{Point2, TransformBox};
use crate::objective::{sum_p_smallest, PointSet, TrimConfig};
use crate::queue::CandidateQueue;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelaxError {
    /// Trapezoid construction requires an angular width below pi.
    ArcTooWide,
    /// The relaxation bound is only valid for angular width below pi/2.
    AngularWidthTooLarge,
}

impl fmt::Display for RelaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelaxError::ArcTooWide => write!(f, "arc width must be below pi"),
            RelaxError::AngularWidthTooLarge => {
                write!(f, "relaxation bound requires angular width below pi/2")
            }
        }
    }
}

impl core::error::Error for RelaxError {}

/// Expansion point of the linearized distance: a translation and a
/// (cos, sin) pair, by default the box center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearizationPoint {
    pub z0: Point2,
    pub c0: f64,
    pub s0: f64,
}

impl LinearizationPoint {
    pub fn at_box_center(b: &TransformBox) -> Self {
        let (z0, theta_c) = b.center();
        LinearizationPoint {
            z0,
            c0: cos(theta_c),
            s0: sin(theta_c),
        }
    }
}

/// Convex isosceles trapezoid in the `(c, s)` plane containing the unit arc
/// `{(cos t, sin t) | theta_min <= t <= theta_max}`. Vertices are ordered
/// inner-low, inner-high, outer-high, outer-low; all four coincide when the
/// arc degenerates to a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trapezoid {
    pub vertices: [Point2; 4],
}

impl Trapezoid {
    /// Convex containment test, agnostic to the winding of the vertex ring.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        let v = &self.vertices;
        let mut area2 = 0.0;
        for i in 0..4 {
            let a = v[i];
            let b = v[(i + 1) % 4];
            area2 += a.x * b.y - b.x * a.y;
        }
        let orient = if area2 >= 0.0 { 1.0 } else { -1.0 };
        if v.iter().all(|&w| (w - v[0]).norm_sq() == 0.0) {
            // fully degenerate (point) trapezoid
            return p.dist_sq(v[0]) <= tol * tol;
        }
        for i in 0..4 {
            let a = v[i];
            let b = v[(i + 1) % 4];
            let edge = b - a;
            if edge.norm_sq() == 0.0 {
                continue;
            }
            let cross = edge.x * (p.y - a.y) - edge.y * (p.x - a.x);
            if orient * cross < -tol {
                return false;
            }
        }
        true
    }
}

/// Build the enclosing trapezoid: the inner parallel side is the chord
/// between the arc endpoints, the outer side lies on the tangent at the
/// mid-angle, with outer vertices the endpoints scaled by
/// `1 / cos(width / 2)`.
pub fn build_trapezoid(theta_min: f64, theta_max: f64) -> Result<Trapezoid, RelaxError> {
    let width = theta_max - theta_min;
    if !(0.0..core::f64::consts::PI).contains(&width) {
        return Err(RelaxError::ArcTooWide);
    }
    let inner_lo = Point2::new(cos(theta_min), sin(theta_min));
    let inner_hi = Point2::new(cos(theta_max), sin(theta_max));
    let scale = 1.0 / cos(0.5 * width);
    Ok(Trapezoid {
        vertices: [inner_lo, inner_hi, inner_hi * scale, inner_lo * scale],
    })
}

/// First-order Taylor expansion of
/// `f(z, c, s) = |[c, -s; s, c] p + z - q|^2` around `lin`, evaluated at
/// `at = (z, c, s)`. A supporting hyperplane of the convex `f`, so it never
/// exceeds `f` itself.
pub fn linearized_dist(
    p: Point2,
    q: Point2,
    lin: &LinearizationPoint,
    at: (Point2, f64, f64),
) -> f64 {
    // residual at the expansion point
    let u = lin.c0 * p.x - lin.s0 * p.y + lin.z0.x - q.x;
    let v = lin.s0 * p.x + lin.c0 * p.y + lin.z0.y - q.y;
    let f0 = u * u + v * v;
    // gradient of the quadratic form at the expansion point
    let g_zx = 2.0 * u;
    let g_zy = 2.0 * v;
    let g_c = 2.0 * (u * p.x + v * p.y);
    let g_s = 2.0 * (-u * p.y + v * p.x);

    let (z, c, s) = at;
    f0 + g_zx * (z.x - lin.z0.x) + g_zy * (z.y - lin.z0.y) + g_c * (c - lin.c0) + g_s * (s - lin.s0)
}

/// Vertices of the polytope `[z_min, z_max] x trapezoid`: 4 translation
/// corners times 4 trapezoid vertices.
fn polytope_vertices(b: &TransformBox, trap: &Trapezoid) -> Vec<(Point2, f64, f64)> {
    let z_corners = [
        Point2::new(b.z_min.x, b.z_min.y),
        Point2::new(b.z_max.x, b.z_min.y),
        Point2::new(b.z_min.x, b.z_max.y),
        Point2::new(b.z_max.x, b.z_max.y),
    ];
    let mut out = Vec::with_capacity(16);
    for z in z_corners {
        for cs in trap.vertices {
            out.push((z, cs.x, cs.y));
        }
    }
    out
}

/// The relaxation lower bound for `b`, restricted per source point to the
/// destination indices surviving in that point's candidate queue (dropped
/// candidates cannot be the nearest destination anywhere in the box).
///
/// Requires angular width below pi/2.
pub fn relaxation_bound(
    b: &TransformBox,
    queues: &[CandidateQueue],
    src: &PointSet,
    dest: &PointSet,
    trim: TrimConfig,
) -> Result<f64, RelaxError> {
    if b.theta_max - b.theta_min >= core::f64::consts::FRAC_PI_2 {
        return Err(RelaxError::AngularWidthTooLarge);
    }
    debug_assert_eq!(queues.len(), src.len());
    let trap = build_trapezoid(b.theta_min, b.theta_max)?;
    let lin = LinearizationPoint::at_box_center(b);
    let vertices = polytope_vertices(b, &trap);

    let mut best = f64::INFINITY;
    let mut mins = Vec::with_capacity(src.len());
    for &v in &vertices {
        mins.clear();
        for (p, queue) in src.iter().zip(queues) {
            let mut m = f64::INFINITY;
            for cand in &queue.entries {
                m = m.min(linearized_dist(*p, dest[cand.idx], &lin, v));
            }
            mins.push(m);
        }
        best = best.min(sum_p_smallest(mins.clone(), trim.p));
    }
    Ok(best)
}
