//! The six benchmark kernels.
//!
//! Each kernel takes an immutable [`CsrGraph`](crate::graph::CsrGraph),
//! allocates its own solution array and is internally parallel on the
//! current rayon pool.

use thiserror::Error;

use crate::graph::{BuildError, NodeId, Weight};

mod bc;
mod bfs;
mod cc;
pub(crate) mod frontier;
mod pagerank;
mod sssp;
mod tc;

pub use bc::betweenness;
pub use bfs::{bfs, bfs_with, BfsConfig, DEFAULT_ALPHA, DEFAULT_BETA};
pub use cc::connected_components;
pub use pagerank::{
    pagerank, PageRankOutput, DEFAULT_DAMPING, DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE,
};
pub use sssp::{sssp, DEFAULT_DELTA, DIST_INF};
pub use tc::{ordered_count, triangle_count, worth_relabelling};

/// BFS parent per vertex; `-1` marks unreachable vertices.
pub type ParentArray = Vec<i32>;
/// Shortest-path distance per vertex; [`DIST_INF`] marks unreachable vertices.
pub type DistanceArray = Vec<u32>;
/// PageRank or betweenness score per vertex.
pub type ScoreArray = Vec<f32>;
/// Component label per vertex.
pub type LabelArray = Vec<NodeId>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("source {vertex} is not a vertex of a {num_nodes}-vertex graph")]
    SourceOutOfRange { vertex: NodeId, num_nodes: usize },
    #[error("source {vertex} has no outgoing edges")]
    ZeroDegreeSource { vertex: NodeId },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("kernel requires a weighted graph")]
    Unweighted,
    #[error("non-positive weight {weight} on edge {src} -> {dst}")]
    NonPositiveWeight {
        src: NodeId,
        dst: NodeId,
        weight: Weight,
    },
    #[error("distance to vertex {vertex} does not fit in 32 bits")]
    DistanceOverflow { vertex: NodeId },
    #[error("kernel requires an undirected graph")]
    Directed,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph with {num_nodes} vertices exceeds the 31-bit parent encoding")]
    TooManyNodes { num_nodes: usize },
    #[error(transparent)]
    Build(#[from] BuildError),
}

pub(crate) fn check_source(g: &crate::graph::CsrGraph, source: NodeId) -> Result<(), KernelError> {
    if source as usize >= g.num_nodes() {
        return Err(KernelError::SourceOutOfRange {
            vertex: source,
            num_nodes: g.num_nodes(),
        });
    }
    Ok(())
}
