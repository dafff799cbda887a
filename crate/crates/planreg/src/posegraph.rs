//! Pose graph over scan frames and map composition along minimum-weight
//! paths to a reference frame.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use planreg_core::RigidTransform2;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PoseGraphError {
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    NodeOutOfRange(usize, usize, usize),
    #[error("edge ({0}, {0}) is a self loop")]
    SelfLoop(usize),
    #[error("edge weight must be non-negative and finite")]
    InvalidWeight,
    #[error("reference node {0} outside 0..{1}")]
    ReferenceOutOfRange(usize, usize),
    #[error("node {0} is not connected to the reference")]
    Disconnected(usize),
}

/// One registered scan pair: `transform` maps frame-`i` coordinates into
/// frame `j`, `weight` is the registration objective.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoseEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
    pub transform: RigidTransform2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoseGraph {
    /// Node (scan) count.
    pub s: usize,
    pub edges: Vec<PoseEdge>,
}

impl PoseGraph {
    pub fn new(s: usize, edges: Vec<PoseEdge>) -> Result<Self, PoseGraphError> {
        for e in &edges {
            if e.i >= s || e.j >= s {
                return Err(PoseGraphError::NodeOutOfRange(e.i, e.j, s));
            }
            if e.i == e.j {
                return Err(PoseGraphError::SelfLoop(e.i));
            }
            if !(e.weight >= 0.0 && e.weight.is_finite()) {
                return Err(PoseGraphError::InvalidWeight);
            }
        }
        Ok(PoseGraph { s, edges })
    }

    /// Directed transform along an edge: stored direction as-is, reverse
    /// direction inverted.
    fn step(&self, e: &PoseEdge, from: usize) -> RigidTransform2 {
        if e.i == from {
            e.transform
        } else {
            e.transform.inverse()
        }
    }
}

#[derive(PartialEq)]
struct FrontierEntry {
    dist: f64,
    node: usize,
}

impl Eq for FrontierEntry {}

impl Ord for FrontierEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then node index for determinism
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for FrontierEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pose of every node in the reference frame: shortest weighted path to the
/// reference, composing edge transforms along the way. The reference pose is
/// the identity.
pub fn compose_map(
    graph: &PoseGraph,
    reference: usize,
) -> Result<Vec<RigidTransform2>, PoseGraphError> {
    if reference >= graph.s {
        return Err(PoseGraphError::ReferenceOutOfRange(reference, graph.s));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); graph.s];
    for (k, e) in graph.edges.iter().enumerate() {
        adj[e.i].push(k);
        adj[e.j].push(k);
    }

    // Dijkstra from the reference; predecessor edges let each pose compose
    // toward the reference.
    let mut dist = vec![f64::INFINITY; graph.s];
    let mut pred: Vec<Option<usize>> = vec![None; graph.s];
    dist[reference] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(FrontierEntry {
        dist: 0.0,
        node: reference,
    });
    while let Some(FrontierEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &k in &adj[node] {
            let e = &graph.edges[k];
            let next = if e.i == node { e.j } else { e.i };
            let nd = d + e.weight;
            if nd < dist[next] {
                dist[next] = nd;
                pred[next] = Some(k);
                heap.push(FrontierEntry {
                    dist: nd,
                    node: next,
                });
            }
        }
    }

    let mut poses = Vec::with_capacity(graph.s);
    for (node, d) in dist.iter().enumerate() {
        if d.is_infinite() {
            return Err(PoseGraphError::Disconnected(node));
        }
        // walk node -> reference, building "apply earlier steps first"
        let mut pose = RigidTransform2::identity();
        let mut cur = node;
        while cur != reference {
            let e = &graph.edges[pred[cur].expect("finite dist implies predecessor")];
            let parent = if e.i == cur { e.j } else { e.i };
            // the step maps frame `cur` into `parent`; it applies after the
            // accumulated node -> `cur` composition
            pose = graph.step(e, cur).compose(&pose);
            cur = parent;
        }
        poses.push(pose);
    }
    Ok(poses)
}
