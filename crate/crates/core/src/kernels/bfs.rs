//! Direction-optimizing breadth-first search.
//!
//! Top-down steps expand the frontier queue through out-edges; bottom-up
//! steps let every unvisited vertex scan its in-edges for a frontier member.
//! The switch to bottom-up happens when the out-degree sum of the frontier
//! exceeds `edges_to_check / alpha`; the switch back when the frontier
//! shrinks below `n / beta`.
//!
//! Unvisited vertices hold `-out_degree` (or `-1` for isolated vertices) in
//! the parent array. A top-down step reads the parent slot anyway before
//! claiming a vertex, so the frontier's degree sum falls out of the claim
//! for free. A final pass rewrites every negative entry to `-1`.

use std::sync::atomic::{AtomicI32, Ordering};

use rayon::prelude::*;

use super::frontier::{Bitmap, LocalBuffer, SlidingQueue};
use super::{check_source, KernelError, ParentArray};
use crate::graph::{CsrGraph, NodeId};

pub const DEFAULT_ALPHA: f64 = 15.0;
pub const DEFAULT_BETA: f64 = 18.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfsConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Allow bottom-up steps. Off gives a plain top-down BFS.
    pub direction_optimizing: bool,
    /// Keep unvisited degrees in the parent array. Off recomputes the
    /// frontier degree sum with a separate pass after every top-down step.
    pub degree_in_parent: bool,
}

impl Default for BfsConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            direction_optimizing: true,
            degree_in_parent: true,
        }
    }
}

pub fn bfs(
    g: &CsrGraph,
    source: NodeId,
    alpha: f64,
    beta: f64,
) -> Result<ParentArray, KernelError> {
    bfs_with(
        g,
        source,
        &BfsConfig {
            alpha,
            beta,
            ..BfsConfig::default()
        },
    )
}

pub fn bfs_with(g: &CsrGraph, source: NodeId, cfg: &BfsConfig) -> Result<ParentArray, KernelError> {
    check_source(g, source)?;
    if !(cfg.alpha > 0.0 && cfg.beta > 0.0) {
        return Err(KernelError::InvalidParameter(
            "alpha and beta must be positive".into(),
        ));
    }
    let n = g.num_nodes();
    if n > i32::MAX as usize {
        return Err(KernelError::TooManyNodes { num_nodes: n });
    }

    let parent: Vec<AtomicI32> = if cfg.degree_in_parent {
        (0..n as NodeId)
            .into_par_iter()
            .map(|v| match g.out_degree(v) {
                0 => AtomicI32::new(-1),
                d => AtomicI32::new(-(d as i32)),
            })
            .collect()
    } else {
        (0..n).into_par_iter().map(|_| AtomicI32::new(-1)).collect()
    };
    parent[source as usize].store(source as i32, Ordering::Relaxed);

    let mut queue = SlidingQueue::with_capacity(n);
    queue.push(source);
    queue.slide();
    let mut bitmaps: Option<(Bitmap, Bitmap)> = None;

    let mut edges_to_check = g.num_edges() as i64;
    let mut scout_count = g.out_degree(source) as i64;
    while !queue.is_empty() {
        if cfg.direction_optimizing && scout_count as f64 > edges_to_check as f64 / cfg.alpha {
            let (front, next) = bitmaps.get_or_insert_with(|| (Bitmap::new(n), Bitmap::new(n)));
            queue_to_bitmap(&queue, front);
            let mut awake = queue.len();
            queue.slide();
            loop {
                let previous = awake;
                awake = bottom_up_step(g, &parent, front, next);
                std::mem::swap(front, next);
                if !(awake >= previous || awake as f64 > n as f64 / cfg.beta) {
                    break;
                }
            }
            bitmap_to_queue(front, &mut queue);
            scout_count = 1;
        } else {
            edges_to_check -= scout_count;
            scout_count = top_down_step(g, &parent, &queue, cfg.degree_in_parent);
            queue.slide();
            if !cfg.degree_in_parent {
                scout_count = queue
                    .window()
                    .par_iter()
                    .map(|v| g.out_degree(v.load(Ordering::Relaxed)) as i64)
                    .sum();
            }
        }
    }

    Ok(parent
        .into_par_iter()
        .map(|p| p.into_inner().max(-1))
        .collect())
}

/// Claims unvisited out-neighbors of the frontier with a compare-and-swap
/// on their parent slot. Returns the summed out-degree of newly claimed
/// vertices (0 when degrees are not encoded).
fn top_down_step(
    g: &CsrGraph,
    parent: &[AtomicI32],
    queue: &SlidingQueue,
    degree_in_parent: bool,
) -> i64 {
    queue
        .window()
        .par_iter()
        .map_init(
            || LocalBuffer::new(queue),
            |buf, u| {
                let u = u.load(Ordering::Relaxed);
                let mut scout = 0i64;
                for &v in g.out_neigh(u) {
                    let slot = &parent[v as usize];
                    let curr = slot.load(Ordering::Relaxed);
                    if curr < 0
                        && slot
                            .compare_exchange(curr, u as i32, Ordering::Relaxed, Ordering::Relaxed)
                            .is_ok()
                    {
                        buf.push(v);
                        if degree_in_parent {
                            scout -= curr as i64;
                        }
                    }
                }
                scout
            },
        )
        .sum()
}

/// Every unvisited vertex looks for a parent among its in-neighbors in
/// `front`. Returns the number of vertices woken.
fn bottom_up_step(g: &CsrGraph, parent: &[AtomicI32], front: &Bitmap, next: &Bitmap) -> usize {
    next.reset();
    (0..g.num_nodes() as NodeId)
        .into_par_iter()
        .with_min_len(1024)
        .map(|u| {
            let slot = &parent[u as usize];
            if slot.load(Ordering::Relaxed) < 0 {
                for &v in g.in_neigh(u) {
                    if front.get(v as usize) {
                        slot.store(v as i32, Ordering::Relaxed);
                        next.set(u as usize);
                        return 1;
                    }
                }
            }
            0
        })
        .sum()
}

fn queue_to_bitmap(queue: &SlidingQueue, bm: &Bitmap) {
    bm.reset();
    queue
        .window()
        .par_iter()
        .for_each(|v| bm.set(v.load(Ordering::Relaxed) as usize));
}

fn bitmap_to_queue(bm: &Bitmap, queue: &mut SlidingQueue) {
    let q = &*queue;
    bm.words()
        .par_iter()
        .enumerate()
        .with_min_len(256)
        .for_each_init(
            || LocalBuffer::new(q),
            |buf, (w, word)| {
                let mut bits = word.load(Ordering::Relaxed);
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    buf.push((w * 64 + b) as NodeId);
                    bits &= bits - 1;
                }
            },
        );
    queue.slide();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_csr, EdgeList};

    fn sym(pairs: &[(NodeId, NodeId)]) -> CsrGraph {
        build_csr(&EdgeList::from_pairs(pairs.to_vec()), false, true).unwrap()
    }

    fn all_configs() -> Vec<BfsConfig> {
        let mut out = Vec::new();
        for direction_optimizing in [true, false] {
            for degree_in_parent in [true, false] {
                out.push(BfsConfig {
                    direction_optimizing,
                    degree_in_parent,
                    ..BfsConfig::default()
                });
            }
        }
        // always switch to bottom-up immediately
        out.push(BfsConfig {
            alpha: 1e-9,
            beta: 1e-9,
            ..BfsConfig::default()
        });
        out
    }

    #[test]
    fn path_parents() {
        let g = sym(&[(0, 1), (1, 2)]);
        for cfg in all_configs() {
            assert_eq!(bfs_with(&g, 0, &cfg).unwrap(), vec![0, 0, 1], "{cfg:?}");
        }
    }

    #[test]
    fn isolated_vertex_unreached() {
        let mut el = EdgeList::from_pairs(vec![(0, 1), (1, 2)]);
        el.set_num_nodes(4);
        let g = build_csr(&el, false, true).unwrap();
        for cfg in all_configs() {
            assert_eq!(bfs_with(&g, 1, &cfg).unwrap(), vec![1, 1, 1, -1]);
        }
    }

    #[test]
    fn directed_bottom_up_uses_in_edges() {
        // 0 -> 1 -> 2, 2 -> 0; from 1: 2 then 0
        let g = build_csr(
            &EdgeList::from_pairs(vec![(0, 1), (1, 2), (2, 0), (3, 0)]),
            true,
            false,
        )
        .unwrap();
        for cfg in all_configs() {
            assert_eq!(bfs_with(&g, 1, &cfg).unwrap(), vec![2, 1, 1, -1], "{cfg:?}");
        }
    }

    #[test]
    fn errors() {
        let g = sym(&[(0, 1)]);
        assert!(matches!(
            bfs(&g, 2, 15.0, 18.0),
            Err(KernelError::SourceOutOfRange { .. })
        ));
        assert!(matches!(
            bfs(&g, 0, 0.0, 18.0),
            Err(KernelError::InvalidParameter(_))
        ));
        assert!(matches!(
            bfs(&g, 0, 15.0, -1.0),
            Err(KernelError::InvalidParameter(_))
        ));
    }

    #[test]
    fn star_from_leaf() {
        let g = sym(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        for cfg in all_configs() {
            assert_eq!(bfs_with(&g, 3, &cfg).unwrap(), vec![3, 0, 0, 3, 0]);
        }
    }
}
