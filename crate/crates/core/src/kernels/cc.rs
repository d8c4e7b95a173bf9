//! Shiloach-Vishkin connected components.
//!
//! Alternates a hooking pass, which points the root of the larger label at
//! the smaller label across every edge, with a full shortcut pass that
//! compresses every label chain to its root. Stops once a hooking pass
//! changes nothing. Directed edges are treated as undirected, yielding weakly
//! connected components.

use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};

use rayon::prelude::*;

use super::LabelArray;
use crate::graph::{CsrGraph, NodeId};

pub fn connected_components(g: &CsrGraph) -> LabelArray {
    let n = g.num_nodes();
    let comp: Vec<AtomicU32> = (0..n as NodeId)
        .into_par_iter()
        .map(AtomicU32::new)
        .collect();
    let label = |v: NodeId| comp[v as usize].load(Ordering::Relaxed);
    loop {
        let change = AtomicBool::new(false);
        (0..n as NodeId)
            .into_par_iter()
            .with_min_len(256)
            .for_each(|u| {
                for &v in g.out_neigh(u) {
                    let (cu, cv) = (label(u), label(v));
                    if cu == cv {
                        continue;
                    }
                    let (high, low) = if cu > cv { (cu, cv) } else { (cv, cu) };
                    if label(high) == high {
                        comp[high as usize].fetch_min(low, Ordering::Relaxed);
                        change.store(true, Ordering::Relaxed);
                    }
                }
            });
        (0..n as NodeId)
            .into_par_iter()
            .with_min_len(1024)
            .for_each(|v| {
                let mut c = label(v);
                while c != label(c) {
                    c = label(c);
                }
                comp[v as usize].store(c, Ordering::Relaxed);
            });
        if !change.into_inner() {
            break;
        }
    }
    comp.into_iter().map(AtomicU32::into_inner).collect()
}
