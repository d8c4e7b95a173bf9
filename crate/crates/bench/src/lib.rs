//! Fixtures shared by the criterion benchmarks.

use gapkit::{
    assign_weights, build_csr, generate, pick_sources, CsrGraph, GenSpec, NodeId, DEFAULT_SEED,
};

/// Undirected Kronecker graph with the default degree.
pub fn kron(scale: u32) -> CsrGraph {
    build_csr(
        &generate(&GenSpec::kronecker(scale)).expect("valid scale"),
        false,
        true,
    )
    .expect("generated ids fit")
}

/// Undirected uniform random graph with the default degree.
pub fn urand(scale: u32) -> CsrGraph {
    build_csr(
        &generate(&GenSpec::uniform(scale)).expect("valid scale"),
        false,
        true,
    )
    .expect("generated ids fit")
}

/// `g` with seeded weights in 1..=255.
pub fn with_weights(g: &CsrGraph) -> CsrGraph {
    let el = assign_weights(g.to_edge_list(), DEFAULT_SEED).expect("unweighted input");
    build_csr(&el, g.is_directed(), false).expect("ids unchanged")
}

/// The first `count` sources of the default picker sequence.
pub fn sources(g: &CsrGraph, count: usize) -> Vec<NodeId> {
    pick_sources(g, count, DEFAULT_SEED).expect("graph has edges")
}
