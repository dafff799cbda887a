//! All-pairs run reports: per-pair solve outcomes plus the configuration
//! they were produced with.

use serde::{Deserialize, Serialize};

/// Solver settings shared by every pair in a run (the per-pair search box
/// comes from the bounding heuristic and is not echoed here).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSettings {
    pub eps: f64,
    pub delta: f64,
    /// Kept fraction; p = ceil(trim * n).
    pub trim: f64,
    pub max_iterations: u64,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings {
            eps: 1e-4,
            delta: 0.1,
            trim: 0.8,
            max_iterations: 10_000_000,
        }
    }
}

/// Outcome of one pairwise registration. Wall time is informational only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub objective: f64,
    pub wall_time_seconds: f64,
    pub iterations: u64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Artifact version producing this report.
    pub version: String,
    pub settings: SolveSettings,
    /// Scan files in node order.
    pub scans: Vec<String>,
    /// Unreadable scans, excluded from pairing.
    pub skipped: Vec<String>,
    pub pairs: Vec<PairRecord>,
}

impl RunReport {
    pub fn new(settings: SolveSettings, scans: Vec<String>, skipped: Vec<String>) -> Self {
        RunReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            settings,
            scans,
            skipped,
            pairs: Vec::new(),
        }
    }
}
