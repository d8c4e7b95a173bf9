//! Synthetic `kron` and `urand` edge generators and edge-weight assignment.
//!
//! Edge `i` is produced by stream block `i / 1024` of a keyed ChaCha8
//! generator, so the output is a pure function of `(seed, spec)` whatever
//! the number of workers. Generated tuples are raw directed pairs; build
//! with `symmetrize` to obtain the undirected benchmark graphs.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{EdgeList, NodeId, Weight};
use crate::rng::{keyed_stream, uniform_below, unit_f64, Purpose, BLOCK_LEN, DEFAULT_SEED};

/// Kronecker quadrant probabilities (Graph 500 parameters).
pub const KRONECKER_A: f64 = 0.57;
pub const KRONECKER_B: f64 = 0.19;
pub const KRONECKER_C: f64 = 0.19;
pub const KRONECKER_D: f64 = 0.05;

pub const MAX_SCALE: u32 = 31;
pub const DEFAULT_DEGREE: u32 = 16;

/// Inclusive range of generated edge weights.
pub const MIN_WEIGHT: Weight = 1;
pub const MAX_WEIGHT: Weight = 255;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("scale {scale} exceeds the maximum of {MAX_SCALE}")]
    ScaleTooLarge { scale: u32 },
    #[error("generator called with a spec of the wrong kind")]
    WrongKind,
    #[error("{avg_degree} x 2^{scale} edges does not fit in memory indices")]
    TooManyEdges { scale: u32, avg_degree: u32 },
    #[error("edge list already carries weights")]
    AlreadyWeighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Kronecker,
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GraphKind,
    pub scale: u32,
    pub avg_degree: u32,
    pub seed: u64,
}

impl GenSpec {
    pub fn kronecker(scale: u32) -> Self {
        Self {
            kind: GraphKind::Kronecker,
            scale,
            avg_degree: DEFAULT_DEGREE,
            seed: DEFAULT_SEED,
        }
    }

    pub fn uniform(scale: u32) -> Self {
        Self {
            kind: GraphKind::UniformRandom,
            ..Self::kronecker(scale)
        }
    }

    pub fn with_degree(mut self, avg_degree: u32) -> Self {
        self.avg_degree = avg_degree;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn num_nodes(&self) -> u64 {
        1u64 << self.scale
    }

    fn edge_count(&self) -> Result<usize, GenError> {
        if self.scale > MAX_SCALE {
            return Err(GenError::ScaleTooLarge { scale: self.scale });
        }
        (self.avg_degree as u64)
            .checked_shl(self.scale)
            .filter(|&m| m >> self.scale == self.avg_degree as u64)
            .and_then(|m| usize::try_from(m).ok())
            .ok_or(GenError::TooManyEdges {
                scale: self.scale,
                avg_degree: self.avg_degree,
            })
    }
}

/// Generates the edge list described by `spec`, dispatching on its kind.
pub fn generate(spec: &GenSpec) -> Result<EdgeList, GenError> {
    match spec.kind {
        GraphKind::Kronecker => generate_kronecker(spec),
        GraphKind::UniformRandom => generate_uniform(spec),
    }
}

fn fill_blocks<F>(spec: &GenSpec, purpose: Purpose, edge: F) -> Result<EdgeList, GenError>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> (NodeId, NodeId) + Sync,
{
    let total = spec.edge_count()?;
    let mut edges = vec![(0 as NodeId, 0 as NodeId); total];
    edges
        .par_chunks_mut(BLOCK_LEN)
        .enumerate()
        .for_each(|(block, chunk)| {
            let mut rng = keyed_stream(spec.seed, purpose, block as u64);
            for slot in chunk {
                *slot = edge(&mut rng);
            }
        });
    let mut el = EdgeList::from_pairs(edges);
    el.set_num_nodes(spec.num_nodes());
    Ok(el)
}

/// Erdős–Rényi style graph: both endpoints uniform over `[0, 2^scale)`.
pub fn generate_uniform(spec: &GenSpec) -> Result<EdgeList, GenError> {
    if spec.kind != GraphKind::UniformRandom {
        return Err(GenError::WrongKind);
    }
    let n = spec.num_nodes();
    fill_blocks(spec, Purpose::UniformEdges, |rng| {
        (
            uniform_below(rng, n) as NodeId,
            uniform_below(rng, n) as NodeId,
        )
    })
}

/// Kronecker (R-MAT) graph: each edge descends `scale` levels of the
/// adjacency matrix, picking a quadrant with probabilities A, B, C, D.
/// The first choice sets the most significant bit of both endpoints.
pub fn generate_kronecker(spec: &GenSpec) -> Result<EdgeList, GenError> {
    if spec.kind != GraphKind::Kronecker {
        return Err(GenError::WrongKind);
    }
    let scale = spec.scale;
    fill_blocks(spec, Purpose::KroneckerEdges, |rng| {
        let (mut u, mut v) = (0 as NodeId, 0 as NodeId);
        for _ in 0..scale {
            let r = unit_f64(rng);
            let (bu, bv) = if r < KRONECKER_A {
                (0, 0)
            } else if r < KRONECKER_A + KRONECKER_B {
                (0, 1)
            } else if r < KRONECKER_A + KRONECKER_B + KRONECKER_C {
                (1, 0)
            } else {
                (1, 1)
            };
            u = (u << 1) | bu;
            v = (v << 1) | bv;
        }
        (u, v)
    })
}

/// Attaches a weight uniform over `1..=255` to every tuple. The weight of
/// tuple `i` depends only on `(seed, i)`.
pub fn assign_weights(edges: EdgeList, seed: u64) -> Result<EdgeList, GenError> {
    if edges.is_weighted() {
        return Err(GenError::AlreadyWeighted);
    }
    let num_nodes = edges.num_nodes();
    let symmetric = edges.is_symmetric();
    let (pairs, _) = edges.into_parts();
    let span = (MAX_WEIGHT - MIN_WEIGHT + 1) as u64;
    let mut weights = vec![0 as Weight; pairs.len()];
    weights
        .par_chunks_mut(BLOCK_LEN)
        .enumerate()
        .for_each(|(block, chunk)| {
            let mut rng = keyed_stream(seed, Purpose::Weights, block as u64);
            for w in chunk {
                *w = MIN_WEIGHT + uniform_below(&mut rng, span) as Weight;
            }
        });
    let mut el = EdgeList::from_parts(pairs, Some(weights)).expect("lengths match");
    if let Some(n) = num_nodes {
        el.set_num_nodes(n);
    }
    el.set_symmetric(symmetric);
    Ok(el)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_ranges() {
        for spec in [GenSpec::uniform(4), GenSpec::kronecker(4)] {
            let el = generate(&spec).unwrap();
            assert_eq!(el.len(), 256);
            assert_eq!(el.num_nodes(), Some(16));
            assert!(el.edges().iter().all(|&(u, v)| u < 16 && v < 16));
        }
    }

    #[test]
    fn scale_limits() {
        assert_eq!(
            generate(&GenSpec::uniform(32)).unwrap_err(),
            GenError::ScaleTooLarge { scale: 32 }
        );
        assert_eq!(
            generate_uniform(&GenSpec::kronecker(3)).unwrap_err(),
            GenError::WrongKind
        );
        assert_eq!(
            generate_kronecker(&GenSpec::uniform(3)).unwrap_err(),
            GenError::WrongKind
        );
    }

    #[test]
    fn scale_zero_is_a_single_vertex() {
        let el = generate(&GenSpec::kronecker(0).with_degree(3)).unwrap();
        assert_eq!(el.edges(), &[(0, 0); 3]);
    }

    #[test]
    fn seeds_change_output() {
        let a = generate(&GenSpec::uniform(6)).unwrap();
        let b = generate(&GenSpec::uniform(6).with_seed(1)).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, generate(&GenSpec::uniform(6)).unwrap());
    }

    #[test]
    fn weights_in_range_and_reproducible() {
        let el = generate(&GenSpec::uniform(8)).unwrap();
        let a = assign_weights(el.clone(), 5).unwrap();
        let b = assign_weights(el, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.weights().unwrap().iter().all(|&w| (1..=255).contains(&w)));
        assert_eq!(a.num_nodes(), Some(256));
        assert_eq!(assign_weights(a, 5).unwrap_err(), GenError::AlreadyWeighted);
    }

    #[test]
    fn weight_of_edge_depends_only_on_index() {
        let long = assign_weights(generate(&GenSpec::uniform(8)).unwrap(), 9).unwrap();
        let short = assign_weights(EdgeList::from_pairs(vec![(0, 1); 3000]), 9).unwrap();
        assert_eq!(&long.weights().unwrap()[..3000], short.weights().unwrap());
    }
}
