//! Serial oracles and correctness checks for kernel outputs.
//!
//! Every check recomputes the answer with a different algorithm than the
//! kernel it checks: a plain queue BFS, binary-heap Dijkstra, push-direction
//! PageRank, per-label traversal, Brandes with predecessor lists, and
//! unordered neighbor intersection. Checks report the first violation they
//! find instead of returning an error.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use crate::graph::{CsrGraph, NodeId};
use crate::kernels::DIST_INF;

/// Largest per-vertex betweenness difference accepted.
pub const BC_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    SourceParent {
        source: NodeId,
        found: i64,
    },
    MissingEdge {
        parent: NodeId,
        child: NodeId,
    },
    DepthMismatch {
        vertex: NodeId,
        parent: NodeId,
        depth: u64,
        parent_depth: u64,
    },
    Reachability {
        vertex: NodeId,
        reachable: bool,
    },
    Distance {
        vertex: NodeId,
        expected: u32,
        found: u32,
    },
    PageRankChange {
        change_sum: f64,
        tolerance: f64,
    },
    ForeignLabel {
        vertex: NodeId,
        label: NodeId,
        expected: NodeId,
    },
    Unreached {
        vertex: NodeId,
    },
    Score {
        vertex: NodeId,
        expected: f64,
        found: f32,
    },
    TriangleCount {
        expected: u64,
        found: u64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { expected, found } => {
                write!(f, "output has {found} entries, graph has {expected} vertices")
            }
            Self::SourceParent { source, found } => {
                write!(f, "parent of source {source} is {found}, not itself")
            }
            Self::MissingEdge { parent, child } => {
                write!(f, "parent edge ({parent}, {child}) is not in the graph")
            }
            Self::DepthMismatch { vertex, parent, depth, parent_depth } => write!(
                f,
                "vertex {vertex} at depth {depth} has parent {parent} at depth {parent_depth}"
            ),
            Self::Reachability { vertex, reachable: true } => {
                write!(f, "vertex {vertex} is reachable but marked unreached")
            }
            Self::Reachability { vertex, reachable: false } => {
                write!(f, "vertex {vertex} is unreachable but has a parent")
            }
            Self::Distance { vertex, expected, found } => {
                write!(f, "distance of vertex {vertex} is {found}, expected {expected}")
            }
            Self::PageRankChange { change_sum, tolerance } => write!(
                f,
                "one more iteration changes scores by {change_sum:e} in total (tolerance {tolerance:e})"
            ),
            Self::ForeignLabel { vertex, label, expected } => write!(
                f,
                "traversal of label {expected} reached vertex {vertex} labelled {label}"
            ),
            Self::Unreached { vertex } => {
                write!(f, "vertex {vertex} not reached by the traversal of its label")
            }
            Self::Score { vertex, expected, found } => {
                write!(f, "score of vertex {vertex} is {found}, expected {expected}")
            }
            Self::TriangleCount { expected, found } => {
                write!(f, "counted {found} triangles, expected {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub violation: Option<Violation>,
}

impl VerifyReport {
    pub fn pass() -> Self {
        Self { violation: None }
    }

    pub fn fail(v: Violation) -> Self {
        Self { violation: Some(v) }
    }

    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }

    /// Description of the violated condition, if any.
    pub fn failure_detail(&self) -> Option<String> {
        self.violation.as_ref().map(ToString::to_string)
    }
}

fn check_len(g: &CsrGraph, len: usize) -> Result<(), Violation> {
    if len != g.num_nodes() {
        return Err(Violation::LengthMismatch {
            expected: g.num_nodes(),
            found: len,
        });
    }
    Ok(())
}

fn report(r: Result<(), Violation>) -> VerifyReport {
    match r {
        Ok(()) => VerifyReport::pass(),
        Err(v) => VerifyReport::fail(v),
    }
}

/// Hop distance from `source` along out-edges, `None` if unreachable.
pub fn bfs_depths(g: &CsrGraph, source: NodeId) -> Vec<Option<u64>> {
    let mut depth = vec![None; g.num_nodes()];
    depth[source as usize] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = depth[u as usize].expect("queued vertices have depths");
        for &v in g.out_neigh(u) {
            if depth[v as usize].is_none() {
                depth[v as usize] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    depth
}

pub fn verify_bfs(g: &CsrGraph, source: NodeId, parent: &[i32]) -> VerifyReport {
    report((|| {
        check_len(g, parent.len())?;
        if parent[source as usize] != source as i32 {
            return Err(Violation::SourceParent {
                source,
                found: parent[source as usize] as i64,
            });
        }
        let depth = bfs_depths(g, source);
        for v in g.vertices() {
            let p = parent[v as usize];
            match (depth[v as usize], p) {
                (None, p) if p >= 0 => {
                    return Err(Violation::Reachability {
                        vertex: v,
                        reachable: false,
                    })
                }
                (None, _) => {}
                (Some(_), p) if p < 0 => {
                    return Err(Violation::Reachability {
                        vertex: v,
                        reachable: true,
                    })
                }
                (Some(_), _) if v == source => {}
                (Some(dv), p) => {
                    let p = p as NodeId;
                    if p as usize >= g.num_nodes() || !g.has_edge(p, v) {
                        return Err(Violation::MissingEdge {
                            parent: p,
                            child: v,
                        });
                    }
                    let dp = depth[p as usize]
                        .expect("a parent with an edge to a reached vertex is reached");
                    if dv != dp + 1 {
                        return Err(Violation::DepthMismatch {
                            vertex: v,
                            parent: p,
                            depth: dv,
                            parent_depth: dp,
                        });
                    }
                }
            }
        }
        Ok(())
    })())
}

/// Dijkstra's algorithm over a binary heap.
pub fn dijkstra(g: &CsrGraph, source: NodeId) -> Vec<u32> {
    let mut dist = vec![DIST_INF; g.num_nodes()];
    dist[source as usize] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u as usize] as u64 {
            continue;
        }
        let Some((neigh, weights)) = g.out_weighted(u) else {
            break;
        };
        for (&v, &w) in neigh.iter().zip(weights) {
            let nd = d + w as u64;
            if nd < dist[v as usize] as u64 {
                dist[v as usize] = nd as u32;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

pub fn verify_sssp(g: &CsrGraph, source: NodeId, dist: &[u32]) -> VerifyReport {
    report((|| {
        check_len(g, dist.len())?;
        let expected = dijkstra(g, source);
        for (v, (&e, &f)) in expected.iter().zip(dist).enumerate() {
            if e != f {
                return Err(Violation::Distance {
                    vertex: v as NodeId,
                    expected: e,
                    found: f,
                });
            }
        }
        Ok(())
    })())
}

/// Total absolute change of one push-direction iteration applied to
/// `scores`, computed serially in `f64`.
pub fn pagerank_change(g: &CsrGraph, scores: &[f32], damping: f64) -> f64 {
    let n = g.num_nodes();
    let base = (1.0 - damping) / n as f64;
    let mut incoming = vec![0f64; n];
    for u in g.vertices() {
        let deg = g.out_degree(u);
        if deg == 0 {
            continue;
        }
        let share = scores[u as usize] as f64 / deg as f64;
        for &v in g.out_neigh(u) {
            incoming[v as usize] += share;
        }
    }
    incoming
        .iter()
        .zip(scores)
        .map(|(&sum, &old)| (base + damping * sum - old as f64).abs())
        .sum()
}

pub fn verify_pr(g: &CsrGraph, scores: &[f32], damping: f32, tolerance: f64) -> VerifyReport {
    report((|| {
        check_len(g, scores.len())?;
        let change_sum = pagerank_change(g, scores, damping as f64);
        if change_sum.is_nan() || change_sum >= tolerance {
            return Err(Violation::PageRankChange {
                change_sum,
                tolerance,
            });
        }
        Ok(())
    })())
}

/// Traverses each label's component once from its first vertex, following
/// edges in both directions.
pub fn verify_cc(g: &CsrGraph, labels: &[NodeId]) -> VerifyReport {
    report((|| {
        check_len(g, labels.len())?;
        let n = g.num_nodes();
        let mut seen_label = std::collections::HashSet::new();
        let mut visited = vec![false; n];
        let mut stack = Vec::new();
        for r in g.vertices() {
            let label = labels[r as usize];
            if !seen_label.insert(label) {
                continue;
            }
            visited[r as usize] = true;
            stack.push(r);
            while let Some(u) = stack.pop() {
                for &v in g.out_neigh(u).iter().chain(g.in_neigh(u)) {
                    if labels[v as usize] != label {
                        return Err(Violation::ForeignLabel {
                            vertex: v,
                            label: labels[v as usize],
                            expected: label,
                        });
                    }
                    if !visited[v as usize] {
                        visited[v as usize] = true;
                        stack.push(v);
                    }
                }
            }
        }
        match visited.iter().position(|&s| !s) {
            Some(v) => Err(Violation::Unreached {
                vertex: v as NodeId,
            }),
            None => Ok(()),
        }
    })())
}

/// Serial Brandes keeping explicit predecessor lists, summed over `sources`
/// (each source's own dependency excluded) and divided by the maximum.
pub fn brandes(g: &CsrGraph, sources: &[NodeId]) -> Vec<f64> {
    let n = g.num_nodes();
    let mut scores = vec![0f64; n];
    for &s in sources {
        let mut sigma = vec![0f64; n];
        let mut dist = vec![u64::MAX; n];
        let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        sigma[s as usize] = 1.0;
        dist[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in g.out_neigh(u) {
                if dist[v as usize] == u64::MAX {
                    dist[v as usize] = dist[u as usize] + 1;
                    queue.push_back(v);
                }
                if dist[v as usize] == dist[u as usize] + 1 {
                    sigma[v as usize] += sigma[u as usize];
                    preds[v as usize].push(u);
                }
            }
        }
        let mut delta = vec![0f64; n];
        for &w in order.iter().rev() {
            for &v in &preds[w as usize] {
                delta[v as usize] +=
                    sigma[v as usize] / sigma[w as usize] * (1.0 + delta[w as usize]);
            }
            if w != s {
                scores[w as usize] += delta[w as usize];
            }
        }
    }
    let max = scores.iter().cloned().fold(0.0, f64::max);
    if max > 0.0 {
        for x in &mut scores {
            *x /= max;
        }
    }
    scores
}

pub fn verify_bc(g: &CsrGraph, sources: &[NodeId], scores: &[f32]) -> VerifyReport {
    report((|| {
        check_len(g, scores.len())?;
        let expected = brandes(g, sources);
        for (v, (&e, &f)) in expected.iter().zip(scores).enumerate() {
            let diff = (e - f as f64).abs();
            if diff.is_nan() || diff >= BC_TOLERANCE {
                return Err(Violation::Score {
                    vertex: v as NodeId,
                    expected: e,
                    found: f,
                });
            }
        }
        Ok(())
    })())
}

/// Intersects the full neighbor lists of both endpoints of every stored
/// edge, which sees each triangle six times.
pub fn brute_force_triangles(g: &CsrGraph) -> u64 {
    let mut total = 0u64;
    for u in g.vertices() {
        let nu = g.out_neigh(u);
        for &v in nu {
            let nv = g.out_neigh(v);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        total += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    total / 6
}

pub fn verify_tc(g: &CsrGraph, count: u64) -> VerifyReport {
    let expected = brute_force_triangles(g);
    if expected == count {
        VerifyReport::pass()
    } else {
        VerifyReport::fail(Violation::TriangleCount {
            expected,
            found: count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_csr, EdgeList};

    fn sym(pairs: &[(NodeId, NodeId)]) -> CsrGraph {
        build_csr(&EdgeList::from_pairs(pairs.to_vec()), false, true).unwrap()
    }

    fn clique(k: NodeId) -> CsrGraph {
        let pairs: Vec<_> = (0..k).flat_map(|u| (0..u).map(move |v| (u, v))).collect();
        sym(&pairs)
    }

    #[test]
    fn bfs_good_and_tampered() {
        let g = sym(&[(0, 1), (1, 2)]);
        assert!(verify_bfs(&g, 0, &[0, 0, 1]).ok());
        assert_eq!(
            verify_bfs(&g, 0, &[0, 0, 0]).violation,
            Some(Violation::MissingEdge {
                parent: 0,
                child: 2
            })
        );
        assert_eq!(
            verify_bfs(&g, 0, &[0, 0, -1]).violation,
            Some(Violation::Reachability {
                vertex: 2,
                reachable: true
            })
        );
        assert!(matches!(
            verify_bfs(&g, 0, &[1, 0, 1]).violation,
            Some(Violation::SourceParent { .. })
        ));
    }

    #[test]
    fn bfs_depth_condition() {
        // triangle 0-1-2 plus 2-3: parent[2] = 1 is an edge but one level too deep
        let g = sym(&[(0, 1), (1, 2), (2, 0), (2, 3)]);
        assert!(verify_bfs(&g, 0, &[0, 0, 0, 2]).ok());
        assert!(matches!(
            verify_bfs(&g, 0, &[0, 0, 1, 2]).violation,
            Some(Violation::DepthMismatch { vertex: 2, .. })
        ));
    }

    #[test]
    fn sssp_good_and_off_by_one() {
        let g = build_csr(
            &EdgeList::from_weighted(&[(0, 1, 10), (0, 2, 1), (2, 1, 2)]),
            true,
            false,
        )
        .unwrap();
        assert!(verify_sssp(&g, 0, &[0, 3, 1]).ok());
        assert_eq!(
            verify_sssp(&g, 0, &[0, 4, 1]).violation,
            Some(Violation::Distance {
                vertex: 1,
                expected: 3,
                found: 4
            })
        );
    }

    #[test]
    fn pr_fixed_point() {
        let g = sym(&[(0, 1)]);
        assert_eq!(pagerank_change(&g, &[0.5, 0.5], 0.85), 0.0);
        assert!(verify_pr(&g, &[0.5, 0.5], 0.85, 1e-4).ok());
        assert!(!verify_pr(&g, &[0.9, 0.1], 0.85, 1e-4).ok());
    }

    #[test]
    fn cc_injected_faults() {
        let g = sym(&[(0, 1), (2, 3)]);
        assert!(verify_cc(&g, &[0, 0, 2, 2]).ok());
        assert_eq!(
            verify_cc(&g, &[0, 0, 0, 0]).violation,
            Some(Violation::Unreached { vertex: 2 })
        );
        assert!(matches!(
            verify_cc(&g, &[0, 1, 2, 2]).violation,
            Some(Violation::ForeignLabel { .. })
        ));
    }

    #[test]
    fn bc_star_and_perturbation() {
        let g = sym(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let sources: Vec<NodeId> = g.vertices().collect();
        assert_eq!(brandes(&g, &sources), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(verify_bc(&g, &sources, &[1.0, 0.0, 0.0, 0.0, 0.0]).ok());
        assert!(!verify_bc(&g, &sources, &[1.0, 0.01, 0.0, 0.0, 0.0]).ok());
    }

    #[test]
    fn tc_cliques() {
        assert!(verify_tc(&clique(3), 1).ok());
        assert_eq!(
            verify_tc(&clique(4), 3).violation,
            Some(Violation::TriangleCount {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(brute_force_triangles(&clique(6)), 20);
    }

    #[test]
    fn length_mismatch_reported() {
        let g = sym(&[(0, 1)]);
        assert!(matches!(
            verify_cc(&g, &[0]).violation,
            Some(Violation::LengthMismatch {
                expected: 2,
                found: 1
            })
        ));
    }
}
