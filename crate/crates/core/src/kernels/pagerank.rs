//! Pull-direction PageRank.
//!
//! Every round first computes each vertex's outgoing contribution
//! `score / out_degree`, then every vertex sums the contributions of its
//! in-neighbors. Each score is written by exactly one worker, so no atomics
//! are needed.

use rayon::prelude::*;

use super::{KernelError, ScoreArray};
use crate::graph::CsrGraph;

pub const DEFAULT_DAMPING: f32 = 0.85;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_MAX_ITERS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankOutput {
    pub scores: ScoreArray,
    pub iterations: usize,
    /// The L1 change of the last iteration fell below the tolerance.
    pub converged: bool,
    /// L1 change of the last iteration.
    pub last_change: f64,
}

pub fn pagerank(
    g: &CsrGraph,
    damping: f32,
    tolerance: f64,
    max_iters: usize,
) -> Result<PageRankOutput, KernelError> {
    let n = g.num_nodes();
    if n == 0 {
        return Err(KernelError::EmptyGraph);
    }
    if !(0.0..=1.0).contains(&damping) {
        return Err(KernelError::InvalidParameter(format!(
            "damping {damping} outside [0, 1]"
        )));
    }
    let init = 1.0 / n as f32;
    let base = (1.0 - damping) / n as f32;
    let mut scores = vec![init; n];
    let mut contrib = vec![0f32; n];
    let mut out = PageRankOutput {
        scores: Vec::new(),
        iterations: 0,
        converged: false,
        last_change: f64::INFINITY,
    };
    for iter in 1..=max_iters {
        contrib
            .par_iter_mut()
            .zip(scores.par_iter())
            .enumerate()
            .for_each(|(u, (c, &s))| {
                let d = g.out_degree(u as u32);
                *c = if d == 0 { 0.0 } else { s / d as f32 };
            });
        let change: f64 = scores
            .par_iter_mut()
            .enumerate()
            .map(|(v, s)| {
                let incoming: f32 = g
                    .in_neigh(v as u32)
                    .iter()
                    .map(|&u| contrib[u as usize])
                    .sum();
                let old = *s;
                *s = base + damping * incoming;
                (*s - old).abs() as f64
            })
            .sum();
        out.iterations = iter;
        out.last_change = change;
        if change < tolerance {
            out.converged = true;
            break;
        }
    }
    out.scores = scores;
    Ok(out)
}
