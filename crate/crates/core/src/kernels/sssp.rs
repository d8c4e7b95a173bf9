//! Δ-stepping single-source shortest paths.
//!
//! Each worker keeps private bins indexed by `dist / delta`. Per round, all
//! workers relax the vertices of one shared bin (the lowest non-empty bin
//! across workers), then copy their own instance of the next lowest bin into
//! the shared bin for the following round. Small local bins of the current
//! index are drained by their owner immediately, without a round trip
//! through the shared bin.
//!
//! A vertex can sit in several bins at once. Stale entries are skipped by
//! comparing the vertex's current distance against the current bin's range.

use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};
use std::sync::{Barrier, Mutex, RwLock};

use super::{check_source, DistanceArray, KernelError};
use crate::graph::{CsrGraph, NodeId};

pub const DEFAULT_DELTA: u32 = 1;

/// Distance of vertices not reachable from the source.
pub const DIST_INF: u32 = u32::MAX;

const NO_BIN: usize = usize::MAX;
const LOCAL_DRAIN_LIMIT: usize = 1000;
const CHUNK: usize = 64;

struct Shared<'g> {
    g: &'g CsrGraph,
    delta: u32,
    dist: Vec<AtomicU32>,
    /// Tagged with the round it holds.
    frontier: RwLock<(usize, Vec<NodeId>)>,
    bin_index: [AtomicUsize; 2],
    cursor: [AtomicUsize; 2],
    barrier: Barrier,
    failure: Mutex<Option<KernelError>>,
}

impl Shared<'_> {
    /// Offending edges are skipped so every worker still reaches the same
    /// barriers; the first error is reported once the search ends.
    fn fail(&self, err: KernelError) {
        let mut slot = self.failure.lock().unwrap_or_else(|e| e.into_inner());
        slot.get_or_insert(err);
    }

    fn relax(&self, u: NodeId, bins: &mut Vec<Vec<NodeId>>) {
        let (neigh, weights) = self.g.out_weighted(u).expect("weighted graph");
        let du = self.dist[u as usize].load(Ordering::Relaxed);
        for (&v, &w) in neigh.iter().zip(weights) {
            if w <= 0 {
                self.fail(KernelError::NonPositiveWeight {
                    src: u,
                    dst: v,
                    weight: w,
                });
                continue;
            }
            let new_dist = match du.checked_add(w as u32) {
                Some(d) if d < DIST_INF => d,
                _ => {
                    self.fail(KernelError::DistanceOverflow { vertex: v });
                    continue;
                }
            };
            let slot = &self.dist[v as usize];
            let mut old = slot.load(Ordering::Relaxed);
            while new_dist < old {
                match slot.compare_exchange_weak(
                    old,
                    new_dist,
                    Ordering::Relaxed,
                    Ordering::Relaxed,
                ) {
                    Ok(_) => {
                        let bin = (new_dist / self.delta) as usize;
                        if bin >= bins.len() {
                            bins.resize_with(bin + 1, Vec::new);
                        }
                        bins[bin].push(v);
                        break;
                    }
                    Err(seen) => old = seen,
                }
            }
        }
    }

    fn worker(&self, leader: bool) {
        let mut bins: Vec<Vec<NodeId>> = Vec::new();
        let mut round = 0usize;
        loop {
            let curr = self.bin_index[round & 1].load(Ordering::Relaxed);
            if curr == NO_BIN {
                break;
            }
            let lower = (curr as u64 * self.delta as u64).min(DIST_INF as u64) as u32;
            {
                let frontier = self.frontier.read().unwrap_or_else(|e| e.into_inner());
                let items = &frontier.1;
                let cursor = &self.cursor[round & 1];
                loop {
                    let start = cursor.fetch_add(CHUNK, Ordering::Relaxed);
                    if start >= items.len() {
                        break;
                    }
                    for &u in &items[start..(start + CHUNK).min(items.len())] {
                        if self.dist[u as usize].load(Ordering::Relaxed) >= lower {
                            self.relax(u, &mut bins);
                        }
                    }
                }
            }
            while curr < bins.len()
                && !bins[curr].is_empty()
                && bins[curr].len() < LOCAL_DRAIN_LIMIT
            {
                let batch = std::mem::take(&mut bins[curr]);
                for &u in &batch {
                    self.relax(u, &mut bins);
                }
            }
            let next = (curr..bins.len()).find(|&i| !bins[i].is_empty());
            if let Some(i) = next {
                self.bin_index[(round + 1) & 1].fetch_min(i, Ordering::Relaxed);
            }
            self.barrier.wait();
            if leader {
                self.bin_index[round & 1].store(NO_BIN, Ordering::Relaxed);
                self.cursor[round & 1].store(0, Ordering::Relaxed);
            }
            let next = self.bin_index[(round + 1) & 1].load(Ordering::Relaxed);
            if next < bins.len() && !bins[next].is_empty() {
                let mut frontier = self.frontier.write().unwrap_or_else(|e| e.into_inner());
                if frontier.0 != round + 1 {
                    frontier.0 = round + 1;
                    frontier.1.clear();
                }
                frontier.1.append(&mut bins[next]);
            }
            round += 1;
            self.barrier.wait();
        }
    }
}

/// Shortest path distances from `source` over positive integer weights.
/// The result does not depend on `delta`, which only trades redundant
/// relaxations against the number of synchronized rounds.
pub fn sssp(g: &CsrGraph, source: NodeId, delta: u32) -> Result<DistanceArray, KernelError> {
    check_source(g, source)?;
    if !g.is_weighted() {
        return Err(KernelError::Unweighted);
    }
    if delta == 0 {
        return Err(KernelError::InvalidParameter(
            "delta must be at least 1".into(),
        ));
    }
    let workers = rayon::current_num_threads().max(1);
    let n = g.num_nodes();
    let mut dist: Vec<AtomicU32> = Vec::with_capacity(n);
    dist.resize_with(n, || AtomicU32::new(DIST_INF));
    dist[source as usize] = AtomicU32::new(0);

    let shared = Shared {
        g,
        delta,
        dist,
        frontier: RwLock::new((0, vec![source])),
        bin_index: [AtomicUsize::new(0), AtomicUsize::new(NO_BIN)],
        cursor: [AtomicUsize::new(0), AtomicUsize::new(0)],
        barrier: Barrier::new(workers),
        failure: Mutex::new(None),
    };
    std::thread::scope(|s| {
        for _ in 1..workers {
            let shared = &shared;
            s.spawn(move || shared.worker(false));
        }
        shared.worker(true);
    });

    if let Some(err) = shared
        .failure
        .into_inner()
        .unwrap_or_else(|e| e.into_inner())
    {
        return Err(err);
    }
    Ok(shared.dist.into_iter().map(AtomicU32::into_inner).collect())
}
