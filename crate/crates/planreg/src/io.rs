//! File formats: plain-text point sets, JSON instances / pose graphs /
//! solver results, and line-delimited JSON traces.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use planreg_core::{Point2, PointSet, RigidTransform2, SolveResult, TraceRecord};

use crate::instances::Instance;
use crate::posegraph::PoseGraph;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed point line {text:?}")]
    MalformedLine {
        path: String,
        line: usize,
        text: String,
    },
    #[error("{path}: no points (empty or comments only)")]
    EmptyPointSet { path: String },
    #[error("{path}: point set contains non-finite coordinates")]
    NonFinite { path: String },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn json_err(path: &Path, source: serde_json::Error) -> IoError {
    IoError::Json {
        path: path.display().to_string(),
        source,
    }
}

/// Text point set: one `x y` pair per line, `#` starts a comment line.
pub fn read_point_set(path: impl AsRef<Path>) -> Result<PointSet, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut points = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || IoError::MalformedLine {
            path: path.display().to_string(),
            line: lineno + 1,
            text: raw.to_string(),
        };
        let mut fields = line.split_whitespace();
        let x: f64 = fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(malformed)?;
        let y: f64 = fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(malformed)?;
        if fields.next().is_some() {
            return Err(malformed());
        }
        points.push(Point2::new(x, y));
    }
    if points.is_empty() {
        return Err(IoError::EmptyPointSet {
            path: path.display().to_string(),
        });
    }
    PointSet::new(points).map_err(|_| IoError::NonFinite {
        path: path.display().to_string(),
    })
}

/// Writes points with round-trip-exact decimal formatting.
pub fn write_point_set(set: &PointSet, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut out = String::new();
    for p in set.iter() {
        out.push_str(&format!("{} {}\n", p.x, p.y));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<(), IoError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| json_err(path, e))?;
    fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| json_err(path, e))
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_json(inst, path.as_ref())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, IoError> {
    read_json(path.as_ref())
}

pub fn write_pose_graph(graph: &PoseGraph, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_json(graph, path.as_ref())
}

pub fn read_pose_graph(path: impl AsRef<Path>) -> Result<PoseGraph, IoError> {
    read_json(path.as_ref())
}

pub fn write_result(result: &SolveResult, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_json(result, path.as_ref())
}

pub fn read_result(path: impl AsRef<Path>) -> Result<SolveResult, IoError> {
    read_json(path.as_ref())
}

pub fn write_poses(poses: &[RigidTransform2], path: impl AsRef<Path>) -> Result<(), IoError> {
    write_json(&poses, path.as_ref())
}

pub fn read_poses(path: impl AsRef<Path>) -> Result<Vec<RigidTransform2>, IoError> {
    read_json(path.as_ref())
}

pub fn write_report(
    report: &crate::report::RunReport,
    path: impl AsRef<Path>,
) -> Result<(), IoError> {
    write_json(report, path.as_ref())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<crate::report::RunReport, IoError> {
    read_json(path.as_ref())
}

/// Trace file: one JSON record per iteration, line-delimited.
pub fn write_trace(records: &[TraceRecord], path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| json_err(path, e))?;
        writeln!(w, "{line}").map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| json_err(path, e)))
        .collect()
}
