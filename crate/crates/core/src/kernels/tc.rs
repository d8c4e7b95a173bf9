//! Triangle counting by ordered sorted-list intersection.
//!
//! Each triangle `u > v > w` is counted once, from its largest vertex.
//! Because neighbor lists are sorted, the scans over `N(u)` and `N(v)` stop
//! as soon as they pass `v` or `w`. On graphs with skewed degrees, vertices
//! are first renumbered by decreasing degree so hubs get small ids and only
//! ever scan the short prefix of their lists.

use rayon::prelude::*;

use super::KernelError;
use crate::graph::{relabel_by_degree, CsrGraph, NodeId};
use crate::sources::{SourcePicker, DEFAULT_SEED};

const SAMPLE_SIZE: usize = 1000;

pub fn triangle_count(g: &CsrGraph) -> Result<u64, KernelError> {
    if g.is_directed() {
        return Err(KernelError::Directed);
    }
    if worth_relabelling(g) {
        let (relabeled, _) = relabel_by_degree(g)?;
        Ok(ordered_count(&relabeled))
    } else {
        Ok(ordered_count(g))
    }
}

/// Counts triangles without considering a relabel.
pub fn ordered_count(g: &CsrGraph) -> u64 {
    (0..g.num_nodes() as NodeId)
        .into_par_iter()
        .with_max_len(64)
        .map(|u| {
            let nu = g.out_neigh(u);
            let mut total = 0u64;
            for &v in nu {
                if v > u {
                    break;
                }
                let mut it = 0;
                for &w in g.out_neigh(v) {
                    if w > v {
                        break;
                    }
                    while nu[it] < w {
                        it += 1;
                    }
                    if nu[it] == w {
                        total += 1;
                    }
                }
            }
            total
        })
        .sum()
}

/// Decides whether relabelling by degree pays off: the average degree must
/// be at least 10 and noticeably above the median of 1000 sampled degrees.
pub fn worth_relabelling(g: &CsrGraph) -> bool {
    let n = g.num_nodes();
    if n == 0 {
        return false;
    }
    let average = g.num_edges() as f64 / n as f64;
    if average < 10.0 {
        return false;
    }
    let Ok(mut picker) = SourcePicker::new(g, DEFAULT_SEED) else {
        return false;
    };
    let count = SAMPLE_SIZE.min(n);
    let mut samples: Vec<usize> = (0..count)
        .map(|_| g.out_degree(picker.pick_next()))
        .collect();
    samples.sort_unstable();
    average / 1.3 > samples[count / 2] as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_csr, EdgeList};

    fn clique(k: NodeId) -> CsrGraph {
        let pairs = (0..k).flat_map(|u| (0..u).map(move |v| (u, v))).collect();
        build_csr(&EdgeList::from_pairs(pairs), false, true).unwrap()
    }

    #[test]
    fn cliques() {
        assert_eq!(triangle_count(&clique(3)).unwrap(), 1);
        assert_eq!(triangle_count(&clique(4)).unwrap(), 4);
        assert_eq!(triangle_count(&clique(5)).unwrap(), 10);
        assert_eq!(triangle_count(&clique(12)).unwrap(), 220);
    }

    #[test]
    fn ring_is_not_relabelled() {
        let pairs = (0..50).map(|v| (v, (v + 1) % 50)).collect();
        let g = build_csr(&EdgeList::from_pairs(pairs), false, true).unwrap();
        assert!(!worth_relabelling(&g));
        assert_eq!(triangle_count(&g).unwrap(), 0);
    }

    #[test]
    fn directed_rejected() {
        let g = build_csr(&EdgeList::from_pairs(vec![(0, 1)]), true, false).unwrap();
        assert_eq!(triangle_count(&g), Err(KernelError::Directed));
    }
}
