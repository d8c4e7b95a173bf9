//! Brandes betweenness centrality from a sample of sources.
//!
//! The forward pass is a level-synchronous BFS that counts shortest paths
//! and flags each edge `(u, v)` with `depth[v] = depth[u] + 1` in a
//! successor bitmap indexed by edge position. The backward pass walks the
//! levels deepest first and pulls dependencies from flagged successors, so
//! it needs neither predecessor lists nor atomics.

use std::sync::atomic::{AtomicI32, AtomicU64, Ordering};

use rayon::prelude::*;

use super::frontier::{Bitmap, LocalBuffer, SlidingQueue};
use super::{check_source, KernelError, ScoreArray};
use crate::graph::{CsrGraph, NodeId};

struct AtomicF64(AtomicU64);

impl AtomicF64 {
    fn new(v: f64) -> Self {
        Self(AtomicU64::new(v.to_bits()))
    }

    #[inline]
    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    #[inline]
    fn set(&self, v: f64) {
        self.0.store(v.to_bits(), Ordering::Relaxed);
    }

    fn add(&self, v: f64) {
        let mut old = self.0.load(Ordering::Relaxed);
        loop {
            let new = (f64::from_bits(old) + v).to_bits();
            match self
                .0
                .compare_exchange_weak(old, new, Ordering::Relaxed, Ordering::Relaxed)
            {
                Ok(_) => return,
                Err(seen) => old = seen,
            }
        }
    }
}

/// Sums source dependencies over `sources`, then divides every score by the
/// largest one. A source's dependency from its own traversal is left out.
pub fn betweenness(g: &CsrGraph, sources: &[NodeId]) -> Result<ScoreArray, KernelError> {
    if sources.is_empty() {
        return Err(KernelError::InvalidParameter("no sources given".into()));
    }
    for &s in sources {
        check_source(g, s)?;
        if g.out_degree(s) == 0 {
            return Err(KernelError::ZeroDegreeSource { vertex: s });
        }
    }
    let n = g.num_nodes();
    let scores: Vec<AtomicF64> = (0..n)
        .into_par_iter()
        .map(|_| AtomicF64::new(0.0))
        .collect();
    let paths: Vec<AtomicF64> = (0..n)
        .into_par_iter()
        .map(|_| AtomicF64::new(0.0))
        .collect();
    let deltas: Vec<AtomicF64> = (0..n)
        .into_par_iter()
        .map(|_| AtomicF64::new(0.0))
        .collect();
    let depths: Vec<AtomicI32> = (0..n).into_par_iter().map(|_| AtomicI32::new(-1)).collect();
    let succ = Bitmap::new(g.num_edges());
    let mut queue = SlidingQueue::with_capacity(n);
    let mut levels: Vec<usize> = Vec::new();

    for &source in sources {
        paths.par_iter().for_each(|p| p.set(0.0));
        depths
            .par_iter()
            .for_each(|d| d.store(-1, Ordering::Relaxed));
        succ.reset();
        paths[source as usize].set(1.0);
        depths[source as usize].store(0, Ordering::Relaxed);

        queue.clear();
        levels.clear();
        queue.push(source);
        queue.slide();
        levels.push(queue.window_start());
        let mut depth = 0;
        while !queue.is_empty() {
            depth += 1;
            forward_step(g, &queue, depth, &depths, &paths, &succ);
            queue.slide();
            levels.push(queue.window_start());
        }

        // level d occupies visited[levels[d]..levels[d + 1]]
        let visited = queue.all();
        for d in (1..levels.len() - 1).rev() {
            visited[levels[d]..levels[d + 1]].par_iter().for_each(|u| {
                let u = u.load(Ordering::Relaxed);
                let pu = paths[u as usize].get();
                let range = g.out_edge_range(u);
                let mut delta_u = 0.0;
                for (e, &v) in range.clone().zip(g.out_neigh(u)) {
                    if succ.get(e) {
                        delta_u += pu / paths[v as usize].get() * (1.0 + deltas[v as usize].get());
                    }
                }
                deltas[u as usize].set(delta_u);
                let s = &scores[u as usize];
                s.set(s.get() + delta_u);
            });
        }
    }

    let max = scores
        .par_iter()
        .map(AtomicF64::get)
        .reduce(|| 0.0, f64::max);
    Ok(scores
        .into_par_iter()
        .map(|s| {
            let s = s.get();
            if max > 0.0 {
                (s / max) as f32
            } else {
                s as f32
            }
        })
        .collect())
}

fn forward_step(
    g: &CsrGraph,
    queue: &SlidingQueue,
    depth: i32,
    depths: &[AtomicI32],
    paths: &[AtomicF64],
    succ: &Bitmap,
) {
    queue.window().par_iter().for_each_init(
        || LocalBuffer::new(queue),
        |buf, u| {
            let u = u.load(Ordering::Relaxed);
            let pu = paths[u as usize].get();
            for (e, &v) in g.out_edge_range(u).zip(g.out_neigh(u)) {
                let slot = &depths[v as usize];
                let mut dv = slot.load(Ordering::Relaxed);
                if dv == -1 {
                    match slot.compare_exchange(-1, depth, Ordering::Relaxed, Ordering::Relaxed) {
                        Ok(_) => {
                            buf.push(v);
                            dv = depth;
                        }
                        Err(seen) => dv = seen,
                    }
                }
                if dv == depth {
                    succ.set(e);
                    paths[v as usize].add(pu);
                }
            }
        },
    );
}
