//! Rigid transforms, per-point squared distances to the destination set, and
//! the trimmed objective.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use crate::geom::{Point2, Rotation};

/// A planar rigid transform `x -> R(theta) x + z`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RigidTransform2 {
    pub z: Point2,
    pub theta: f64,
}

impl RigidTransform2 {
    pub fn new(z: Point2, theta: f64) -> Self {
        RigidTransform2 { z, theta }
    }

    pub fn identity() -> Self {
        RigidTransform2 {
            z: Point2::ZERO,
            theta: 0.0,
        }
    }

    pub fn apply(&self, x: Point2) -> Point2 {
        Rotation::new(self.theta).apply(x) + self.z
    }

    /// `self.compose(inner)` applies `inner` first, then `self`.
    pub fn compose(&self, inner: &RigidTransform2) -> RigidTransform2 {
        RigidTransform2 {
            z: Rotation::new(self.theta).apply(inner.z) + self.z,
            theta: self.theta + inner.theta,
        }
    }

    pub fn inverse(&self) -> RigidTransform2 {
        let inv_rot = Rotation::new(-self.theta);
        RigidTransform2 {
            z: -inv_rot.apply(self.z),
            theta: -self.theta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveError {
    EmptyPointSet,
    NonFinitePoint,
    /// `p` must satisfy `1 <= p <= n`.
    TrimOutOfRange,
}

impl fmt::Display for ObjectiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveError::EmptyPointSet => write!(f, "point set is empty"),
            ObjectiveError::NonFinitePoint => write!(f, "point set contains non-finite point"),
            ObjectiveError::TrimOutOfRange => write!(f, "trim count p out of range"),
        }
    }
}

impl core::error::Error for ObjectiveError {}

/// A non-empty, finite point set.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(try_from = "Vec<Point2>", into = "Vec<Point2>")
)]
pub struct PointSet {
    points: Vec<Point2>,
}

impl TryFrom<Vec<Point2>> for PointSet {
    type Error = ObjectiveError;
    fn try_from(points: Vec<Point2>) -> Result<Self, ObjectiveError> {
        PointSet::new(points)
    }
}

impl From<PointSet> for Vec<Point2> {
    fn from(set: PointSet) -> Vec<Point2> {
        set.points
    }
}

impl PointSet {
    pub fn new(points: Vec<Point2>) -> Result<Self, ObjectiveError> {
        if points.is_empty() {
            return Err(ObjectiveError::EmptyPointSet);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(ObjectiveError::NonFinitePoint);
        }
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// Largest point norm; the default scale used to make angular extents
    /// commensurable with translations (arc length = radius * angle).
    pub fn max_norm(&self) -> f64 {
        let mut m: f64 = 0.0;
        for p in &self.points {
            m = m.max(p.norm());
        }
        m
    }
}

impl Deref for PointSet {
    type Target = [Point2];
    fn deref(&self) -> &[Point2] {
        &self.points
    }
}

/// Number of smallest residuals kept in the trimmed sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrimConfig {
    pub p: usize,
}

impl TrimConfig {
    pub fn new(p: usize, n: usize) -> Result<Self, ObjectiveError> {
        if p == 0 || p > n {
            return Err(ObjectiveError::TrimOutOfRange);
        }
        Ok(TrimConfig { p })
    }
}

pub fn apply_transform(t: &RigidTransform2, x: Point2) -> Point2 {
    t.apply(x)
}

/// Minimum squared distance from the transformed source point to the
/// destination set, with the index of a minimizer (smallest index on ties).
pub fn point_to_set_sq(t: &RigidTransform2, x: Point2, dest: &PointSet) -> (f64, usize) {
    let tx = t.apply(x);
    let mut best = f64::INFINITY;
    let mut best_idx = 0;
    for (j, q) in dest.iter().enumerate() {
        let d = tx.dist_sq(*q);
        if d < best {
            best = d;
            best_idx = j;
        }
    }
    (best, best_idx)
}

/// Sum of the `p` smallest values of a residual vector (consumed).
pub(crate) fn sum_p_smallest(mut residuals: Vec<f64>, p: usize) -> f64 {
    debug_assert!(p >= 1 && p <= residuals.len());
    residuals.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    residuals[..p].iter().sum()
}

/// The trimmed objective: sum of the `p` smallest per-point squared
/// distances to the destination set.
pub fn trimmed_objective(
    t: &RigidTransform2,
    src: &PointSet,
    dest: &PointSet,
    trim: TrimConfig,
) -> Result<f64, ObjectiveError> {
    if trim.p == 0 || trim.p > src.len() {
        return Err(ObjectiveError::TrimOutOfRange);
    }
    let residuals: Vec<f64> = src.iter().map(|p| point_to_set_sq(t, *p, dest).0).collect();
    Ok(sum_p_smallest(residuals, trim.p))
}

/// Like [`trimmed_objective`], also reporting the kept source indices
/// (smaller source indices win boundary ties).
pub fn trimmed_objective_with_inliers(
    t: &RigidTransform2,
    src: &PointSet,
    dest: &PointSet,
    trim: TrimConfig,
) -> Result<(f64, Vec<usize>), ObjectiveError> {
    if trim.p == 0 || trim.p > src.len() {
        return Err(ObjectiveError::TrimOutOfRange);
    }
    let mut residuals: Vec<(f64, usize)> = src
        .iter()
        .enumerate()
        .map(|(i, p)| (point_to_set_sq(t, *p, dest).0, i))
        .collect();
    residuals.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let kept = &residuals[..trim.p];
    let value = kept.iter().map(|(d, _)| d).sum();
    let mut inliers: Vec<usize> = kept.iter().map(|&(_, i)| i).collect();
    inliers.sort_unstable();
    Ok((value, inliers))
}
