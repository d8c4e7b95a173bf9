//! Deterministic selection of benchmark source vertices.

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{CsrGraph, NodeId};
use crate::rng::{keyed_stream, uniform_below, Purpose};

pub use crate::rng::DEFAULT_SEED;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SourceError {
    #[error("graph has no vertex with outgoing edges")]
    NoEdges,
    #[error("fixed source {vertex} is not a vertex of a {num_nodes}-vertex graph")]
    OutOfRange { vertex: NodeId, num_nodes: usize },
}

/// Draws vertices uniformly at random, rejecting those with out-degree 0.
///
/// The sequence is a pure function of the seed and the graph: draw `k`
/// consumes the ChaCha8 stream keyed by the seed from where draw `k - 1`
/// left off.
pub struct SourcePicker<'g> {
    graph: &'g CsrGraph,
    rng: ChaCha8Rng,
    fixed: Option<NodeId>,
}

impl<'g> SourcePicker<'g> {
    pub fn new(graph: &'g CsrGraph, seed: u64) -> Result<Self, SourceError> {
        if graph.num_edges() == 0 {
            return Err(SourceError::NoEdges);
        }
        Ok(Self {
            graph,
            rng: keyed_stream(seed, Purpose::Sources, 0),
            fixed: None,
        })
    }

    /// A picker that always returns `source`.
    pub fn fixed(graph: &'g CsrGraph, source: NodeId) -> Result<Self, SourceError> {
        if source as usize >= graph.num_nodes() {
            return Err(SourceError::OutOfRange {
                vertex: source,
                num_nodes: graph.num_nodes(),
            });
        }
        Ok(Self {
            graph,
            rng: keyed_stream(0, Purpose::Sources, 0),
            fixed: Some(source),
        })
    }

    pub fn pick_next(&mut self) -> NodeId {
        if let Some(v) = self.fixed {
            return v;
        }
        let n = self.graph.num_nodes() as u64;
        loop {
            let v = uniform_below(&mut self.rng, n) as NodeId;
            if self.graph.out_degree(v) > 0 {
                return v;
            }
        }
    }
}

/// The first `count` vertices of the picker sequence for `seed`.
pub fn pick_sources(g: &CsrGraph, count: usize, seed: u64) -> Result<Vec<NodeId>, SourceError> {
    let mut picker = SourcePicker::new(g, seed)?;
    Ok((0..count).map(|_| picker.pick_next()).collect())
}
