//! Globally optimal planar point-set registration by branch and bound.
//!
//! Finds the rigid transformation `T(x) = R(theta) x + z` minimizing the
//! trimmed sum of squared distances between a transformed source point set
//! and a destination point set, over a box in `(z_x, z_y, theta)` space.
//! The search is a best-first branch and bound with two complementary lower
//! bounds: a cheap bound built from minimum arc-to-rectangle distances and a
//! relaxation bound built from a concave linearized surrogate, plus an
//! incremental per-point candidate queue that avoids recomputing most
//! distances after a box split.
//!
//! The crate is `no_std` (with `alloc`); file formats, instance generation
//! and the command line live in the companion `planreg` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bnb;
pub mod geom;
pub mod objective;
pub mod queue;
pub mod relax;

pub use bnb::{SolveResult, SolveStats, SolverConfig, TraceRecord};
pub use geom::{Arc, Point2, Rect, Rotation, TransformBox};
pub use objective::{PointSet, RigidTransform2, TrimConfig};
pub use queue::{Candidate, CandidateQueue, ConsistencyReport};
pub use relax::{LinearizationPoint, Trapezoid};
