//! Per-(box, source point) candidate queues: an ascending list of
//! (squared-distance lower bound, destination index) pairs plus an upper
//! bound on the best achievable distance. Queues are built once for the root
//! box and updated incrementally on every split, dropping destination points
//! that can no longer be the nearest one anywhere in the child box.

use alloc::vec::Vec;

use crate::geom::{arc_rect_dist_max, arc_rect_dist_min, Arc, Point2, Rect, TransformBox};
use crate::objective::{sum_p_smallest, PointSet, TrimConfig};

/// Minimum and maximum squared distance between the swept image of source
/// point `p` over `b` and destination point `q`: the arc
/// `{R(theta) p | theta in [theta_min, theta_max]}` against the rectangle
/// `{x | q - z_max <= x <= q - z_min}`.
pub fn dmin_dmax(b: &TransformBox, p: Point2, q: Point2) -> (f64, f64) {
    let arc = Arc::sweep(p, b.theta_min, b.theta_max);
    let rect = Rect::new(q - b.z_max, q - b.z_min);
    (
        arc_rect_dist_min(&arc, &rect),
        arc_rect_dist_max(&arc, &rect),
    )
}

pub fn dmin(b: &TransformBox, p: Point2, q: Point2) -> f64 {
    let arc = Arc::sweep(p, b.theta_min, b.theta_max);
    let rect = Rect::new(q - b.z_max, q - b.z_min);
    arc_rect_dist_min(&arc, &rect)
}

/// One queue entry: a lower bound `d` on the squared distance achievable
/// with destination point `idx`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub d: f64,
    pub idx: usize,
}

/// The candidate list for one (box, source point) pair, ascending by `d`,
/// with `upper` an upper bound on the best achievable squared distance.
#[derive(Clone, Debug)]
pub struct CandidateQueue {
    pub entries: Vec<Candidate>,
    pub upper: f64,
}

impl CandidateQueue {
    pub fn head(&self) -> Candidate {
        self.entries[0]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Result of checking the four consistency conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// Every stored `d` under-estimates the true minimum distance for its index.
    pub cond1: bool,
    /// `upper` over-estimates the minimum over destinations of the maximum distance.
    pub cond2: bool,
    /// Every absent destination index has true minimum distance >= head `d`.
    pub cond3: bool,
    /// Head `d` equals the true minimum distance over all destinations.
    pub cond4: bool,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3 && self.cond4
    }
}

/// Build the queue for the root box: one candidate per destination point
/// with its exact minimum distance, `upper` the minimum of the maximum
/// distances.
pub fn init_queue(root: &TransformBox, p: Point2, dest: &PointSet) -> CandidateQueue {
    let mut entries = Vec::with_capacity(dest.len());
    let mut upper = f64::INFINITY;
    for (j, q) in dest.iter().enumerate() {
        let (lo, hi) = dmin_dmax(root, p, *q);
        entries.push(Candidate { d: lo, idx: j });
        upper = upper.min(hi);
    }
    entries.sort_by(|a, b| a.d.partial_cmp(&b.d).unwrap());
    CandidateQueue { entries, upper }
}

/// Update a parent queue for a child box.
///
/// The parent list is consumed front to back: the head is always recomputed;
/// further candidates are recomputed while their stale bound does not exceed
/// the running minimum; the remaining candidates are carried over unchanged
/// while their stale bound is strictly below the new upper bound, and dropped
/// once it is not (they cannot be the nearest destination anywhere in the
/// child). The parent is read immutably so the same queue can seed both
/// children of a split.
///
/// Returns the child queue and the number of distance-pair evaluations
/// performed.
pub fn update_queue(
    child: &TransformBox,
    parent: &CandidateQueue,
    p: Point2,
    dest: &PointSet,
) -> (CandidateQueue, usize) {
    debug_assert!(!parent.is_empty());
    let mut iter = parent.entries.iter();
    let first = iter.next().unwrap();

    let (mut running_min, mut upper) = dmin_dmax(child, p, dest[first.idx]);
    let mut evals = 1;
    let mut entries = Vec::with_capacity(parent.len());
    entries.push(Candidate {
        d: running_min,
        idx: first.idx,
    });

    // First phase: recompute candidates whose stale bound could still beat
    // the running minimum (non-strict guard: recompute on ties).
    let mut carry_from = None;
    for cand in iter.by_ref() {
        if cand.d <= running_min {
            let (lo, hi) = dmin_dmax(child, p, dest[cand.idx]);
            evals += 1;
            running_min = running_min.min(lo);
            upper = upper.min(hi);
            entries.push(Candidate {
                d: lo,
                idx: cand.idx,
            });
        } else {
            carry_from = Some(*cand);
            break;
        }
    }

    // Second phase: carry stale candidates while their bound is strictly
    // below the upper bound; the parent is sorted, so the first failure
    // drops all the rest.
    if let Some(cand) = carry_from {
        if upper > cand.d {
            entries.push(cand);
            for cand in iter {
                if upper > cand.d {
                    entries.push(*cand);
                } else {
                    break;
                }
            }
        }
    }

    entries.sort_by(|a, b| a.d.partial_cmp(&b.d).unwrap());
    (CandidateQueue { entries, upper }, evals)
}

/// Evaluate the four consistency conditions by direct recomputation.
pub fn check_consistency(
    q: &CandidateQueue,
    b: &TransformBox,
    p: Point2,
    dest: &PointSet,
) -> ConsistencyReport {
    // Comparisons against recomputed values allow a 1e-12 relative slack:
    // stale bounds were computed on an ancestor box through a different
    // arithmetic path.
    let slack = |x: f64, y: f64| 1e-12 * x.abs().max(y.abs()).max(1e-300);

    let m = dest.len();
    let mut present = alloc::vec![false; m];
    let mut cond1 = true;
    for c in &q.entries {
        present[c.idx] = true;
        let true_d = dmin(b, p, dest[c.idx]);
        if true_d < c.d - slack(true_d, c.d) {
            cond1 = false;
        }
    }

    let mut min_dmax = f64::INFINITY;
    let mut true_min = f64::INFINITY;
    for qj in dest.iter() {
        let (lo, hi) = dmin_dmax(b, p, *qj);
        min_dmax = min_dmax.min(hi);
        true_min = true_min.min(lo);
    }
    let cond2 = q.upper >= min_dmax;

    let head = q.head().d;
    let mut cond3 = true;
    for (j, qj) in dest.iter().enumerate() {
        if present[j] {
            continue;
        }
        let true_d = dmin(b, p, *qj);
        if true_d < head - slack(true_d, head) {
            cond3 = false;
        }
    }

    let cond4 = (head - true_min).abs() <= slack(head, true_min);

    ConsistencyReport {
        cond1,
        cond2,
        cond3,
        cond4,
    }
}

/// The cheap lower bound: sum of the `p` smallest head distances across the
/// per-source-point queues.
pub fn cheap_bound(queues: &[CandidateQueue], trim: TrimConfig) -> f64 {
    let heads: Vec<f64> = queues.iter().map(|q| q.head().d).collect();
    sum_p_smallest(heads, trim.p)
}
