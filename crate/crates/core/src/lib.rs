//! Shared-memory graph benchmark kernels.
//!
//! The crate covers the whole pipeline: parse or generate an edge list,
//! build an immutable [`CsrGraph`], run one of six kernels (BFS, SSSP,
//! PageRank, connected components, betweenness centrality, triangle
//! counting), check the output against an independent serial oracle in
//! [`verify`], and time repeated trials with [`harness`].

pub mod generate;
pub mod graph;
pub mod harness;

pub mod io;
pub mod kernels;
mod rng;
pub mod sources;
pub mod verify;

pub use generate::{assign_weights, generate, GenError, GenSpec, GraphKind};
pub use graph::{
    build_csr, relabel_by_degree, BuildError, CsrGraph, EdgeList, NodeId, Permutation, Weight,
};
pub use harness::{
    run_benchmark, BenchPlan, BenchReport, GraphSet, HarnessError, Kernel, TrialResult,
};
pub use io::{load_graph, GraphFileFormat, GraphIoError};
pub use kernels::{
    DistanceArray, KernelError, LabelArray, PageRankOutput, ParentArray, ScoreArray, DIST_INF,
};
pub use sources::{pick_sources, SourcePicker, DEFAULT_SEED};
