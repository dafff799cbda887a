//! Best-first branch and bound over the `(z_x, z_y, theta)` box: pop the
//! node with the lowest lower bound, split along the longest dimension,
//! rebuild the candidate queues for each child, combine the cheap and
//! relaxation bounds, evaluate the incumbent at the child centers, and prune
//! everything whose bound certifies it cannot beat the incumbent by more
//! than the relative tolerance.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::geom::{GeomError, TransformBox};
use crate::objective::{
    trimmed_objective, trimmed_objective_with_inliers, ObjectiveError, PointSet, RigidTransform2,
    TrimConfig,
};
use crate::queue::{cheap_bound, init_queue, update_queue, CandidateQueue};
use crate::relax::relaxation_bound;

#[derive(Clone, Copy, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// Relative optimality tolerance: terminate once `UB <= (1+epsilon) * LB`.
    pub epsilon: f64,
    /// Box-size threshold (in scaled units) below which the relaxation bound
    /// is computed in addition to the cheap bound. Zero disables it.
    pub delta: f64,
    /// Number of residuals kept in the trimmed sum.
    pub p: usize,
    pub root_box: TransformBox,
    /// Safety cap; exceeding it returns the best incumbent, uncertified.
    pub max_iterations: u64,
    /// Scale applied to angular extents for split and threshold comparisons;
    /// defaults to the largest source point norm.
    pub angular_scale_override: Option<f64>,
    /// When false, every child rebuilds its queues from scratch instead of
    /// updating the parent's (the reference baseline for the queue ablation).
    pub incremental_queues: bool,
}

impl SolverConfig {
    pub fn new(root_box: TransformBox, p: usize) -> Self {
        SolverConfig {
            epsilon: 1e-4,
            delta: 0.1,
            p,
            root_box,
            max_iterations: 10_000_000,
            angular_scale_override: None,
            incremental_queues: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveError {
    InvalidConfig,
    TrimOutOfRange,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::InvalidConfig => write!(f, "invalid solver configuration"),
            SolveError::TrimOutOfRange => write!(f, "trim count p out of range"),
        }
    }
}

impl core::error::Error for SolveError {}

impl From<ObjectiveError> for SolveError {
    fn from(_: ObjectiveError) -> Self {
        SolveError::TrimOutOfRange
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveStats {
    pub iterations: u64,
    pub nodes_created: u64,
    pub nodes_pruned: u64,
    pub dmin_evaluations: u64,
    pub phir_evaluations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceRecord {
    pub iter: u64,
    pub ub: f64,
    pub lb: f64,
    pub active_nodes: usize,
}

#[derive(Clone, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveResult {
    pub transform: RigidTransform2,
    pub objective: f64,
    pub lower_bound_at_exit: f64,
    pub relative_gap: f64,
    pub certified: bool,
    pub inlier_indices: Vec<usize>,
    pub stats: SolveStats,
}

struct BoxNode {
    bx: TransformBox,
    lower: f64,
    queues: Vec<CandidateQueue>,
    id: u64,
}

/// Heap ordering: lowest lower bound first, FIFO (creation order) on ties.
struct HeapEntry(BoxNode);

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.0.lower == other.0.lower && self.0.id == other.0.id
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap: invert so the smallest lower pops first.
        other
            .0
            .lower
            .partial_cmp(&self.0.lower)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.0.id.cmp(&self.0.id))
    }
}

fn center_transform(b: &TransformBox) -> RigidTransform2 {
    let (z, theta) = b.center();
    RigidTransform2::new(z, theta)
}

/// Combined lower bound for a box with already-built queues: always the
/// cheap bound, plus the relaxation bound when the box is small enough (both
/// the scaled-size gate and the angular-width hypothesis must hold).
#[allow(clippy::too_many_arguments)]
fn combined_lower(
    bx: &TransformBox,
    queues: &[CandidateQueue],
    src: &PointSet,
    dest: &PointSet,
    trim: TrimConfig,
    delta: f64,
    angular_scale: f64,
    stats: &mut SolveStats,
) -> f64 {
    let phi_c = cheap_bound(queues, trim);
    let small = bx.largest_dim(angular_scale) < delta;
    let narrow = bx.theta_max - bx.theta_min < core::f64::consts::FRAC_PI_2;
    if small && narrow {
        if let Ok(phi_r) = relaxation_bound(bx, queues, src, dest, trim) {
            stats.phir_evaluations += 1;
            return phi_c.max(phi_r);
        }
    }
    phi_c
}

pub fn solve(
    src: &PointSet,
    dest: &PointSet,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    solve_traced(src, dest, cfg, &mut |_| {})
}

/// Like [`solve`], invoking `trace` once per iteration with the incumbent,
/// the best active lower bound and the active node count.
pub fn solve_traced(
    src: &PointSet,
    dest: &PointSet,
    cfg: &SolverConfig,
    trace: &mut dyn FnMut(TraceRecord),
) -> Result<SolveResult, SolveError> {
    if !cfg.root_box.is_valid()
        || cfg.epsilon <= 0.0
        || cfg.epsilon.is_nan()
        || cfg.delta < 0.0
        || cfg.delta.is_nan()
    {
        return Err(SolveError::InvalidConfig);
    }
    let trim = TrimConfig::new(cfg.p, src.len()).map_err(SolveError::from)?;
    let angular_scale = cfg
        .angular_scale_override
        .unwrap_or_else(|| src.max_norm())
        .max(f64::MIN_POSITIVE);

    let mut stats = SolveStats::default();
    let prune_factor = 1.0 + cfg.epsilon;

    // Root node: exact queues, bound, incumbent at the root center.
    let root_queues: Vec<CandidateQueue> = src
        .iter()
        .map(|p| init_queue(&cfg.root_box, *p, dest))
        .collect();
    stats.dmin_evaluations += (src.len() * dest.len()) as u64;
    let root_lower = combined_lower(
        &cfg.root_box,
        &root_queues,
        src,
        dest,
        trim,
        cfg.delta,
        angular_scale,
        &mut stats,
    );

    let mut incumbent = center_transform(&cfg.root_box);
    let mut ub = trimmed_objective(&incumbent, src, dest, trim)?;

    let mut heap = BinaryHeap::new();
    let mut next_id: u64 = 1;
    heap.push(HeapEntry(BoxNode {
        bx: cfg.root_box,
        lower: root_lower,
        queues: root_queues,
        id: 0,
    }));
    stats.nodes_created = 1;

    // Global lower bound certificate: the minimum lower bound over every box
    // retired from the active set (pruned or unsplittable leaf).
    let mut retired_lower = f64::INFINITY;
    let mut hit_cap = false;

    while let Some(HeapEntry(node)) = heap.pop() {
        if node.lower * prune_factor >= ub {
            stats.nodes_pruned += 1;
            retired_lower = retired_lower.min(node.lower);
            continue;
        }
        if stats.iterations >= cfg.max_iterations {
            heap.push(HeapEntry(node));
            hit_cap = true;
            break;
        }
        stats.iterations += 1;

        let children = match node.bx.split(angular_scale) {
            Ok(pair) => pair,
            Err(GeomError::DegenerateBox) => {
                // Nothing left to refine; the bound is exact here.
                retired_lower = retired_lower.min(node.lower);
                continue;
            }
            Err(_) => return Err(SolveError::InvalidConfig),
        };

        for child in [children.0, children.1] {
            let queues: Vec<CandidateQueue> = if cfg.incremental_queues {
                src.iter()
                    .zip(&node.queues)
                    .map(|(p, parent_q)| {
                        let (q, evals) = update_queue(&child, parent_q, *p, dest);
                        stats.dmin_evaluations += evals as u64;
                        q
                    })
                    .collect()
            } else {
                stats.dmin_evaluations += (src.len() * dest.len()) as u64;
                src.iter().map(|p| init_queue(&child, *p, dest)).collect()
            };

            let lower = combined_lower(
                &child,
                &queues,
                src,
                dest,
                trim,
                cfg.delta,
                angular_scale,
                &mut stats,
            );

            let candidate = center_transform(&child);
            let value = trimmed_objective(&candidate, src, dest, trim)?;
            if value < ub {
                ub = value;
                incumbent = candidate;
            }

            stats.nodes_created += 1;
            if lower * prune_factor >= ub {
                stats.nodes_pruned += 1;
                retired_lower = retired_lower.min(lower);
            } else {
                heap.push(HeapEntry(BoxNode {
                    bx: child,
                    lower,
                    queues,
                    id: next_id,
                }));
                next_id += 1;
            }
        }

        let active_lb = heap
            .peek()
            .map(|e| e.0.lower)
            .unwrap_or(retired_lower)
            .min(retired_lower);
        trace(TraceRecord {
            iter: stats.iterations,
            ub,
            lb: active_lb.min(ub),
            active_nodes: heap.len(),
        });
    }

    let mut lb_exit = retired_lower;
    for entry in heap.iter() {
        lb_exit = lb_exit.min(entry.0.lower);
    }
    if !lb_exit.is_finite() {
        // Root never split (cap of zero); only the trivial bound is known.
        lb_exit = root_lower.min(ub);
    }
    lb_exit = lb_exit.min(ub);

    let relative_gap = if ub == lb_exit {
        0.0
    } else if lb_exit > 0.0 {
        (ub - lb_exit) / lb_exit
    } else {
        f64::INFINITY
    };

    let (objective, inliers) = trimmed_objective_with_inliers(&incumbent, src, dest, trim)?;
    Ok(SolveResult {
        transform: incumbent,
        objective,
        lower_bound_at_exit: lb_exit,
        relative_gap,
        certified: !hit_cap,
        inlier_indices: inliers,
        stats,
    })
}
