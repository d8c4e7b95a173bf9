#![allow(dead_code)]

use gapkit::{build_csr, generate, CsrGraph, EdgeList, GenSpec, NodeId};

pub fn kron(scale: u32) -> CsrGraph {
    build_csr(&generate(&GenSpec::kronecker(scale)).unwrap(), false, true).unwrap()
}

pub fn urand(scale: u32) -> CsrGraph {
    build_csr(&generate(&GenSpec::uniform(scale)).unwrap(), false, true).unwrap()
}

pub fn sym(pairs: Vec<(NodeId, NodeId)>) -> CsrGraph {
    build_csr(&EdgeList::from_pairs(pairs), false, true).unwrap()
}

pub fn path(n: NodeId) -> CsrGraph {
    sym((1..n).map(|v| (v - 1, v)).collect())
}

pub fn star(leaves: NodeId) -> CsrGraph {
    sym((1..=leaves).map(|v| (0, v)).collect())
}

pub fn ring(n: NodeId) -> CsrGraph {
    sym((0..n).map(|v| (v, (v + 1) % n)).collect())
}

pub fn clique(k: NodeId) -> CsrGraph {
    sym((0..k).flat_map(|u| (0..u).map(move |v| (u, v))).collect())
}

/// Toy graphs plus the scale-10 synthetic graphs.
pub fn test_graphs() -> Vec<(&'static str, CsrGraph)> {
    vec![
        ("path", path(12)),
        ("star", star(9)),
        ("ring", ring(15)),
        ("k5", clique(5)),
        ("kron10", kron(10)),
        ("urand10", urand(10)),
    ]
}

/// Union-find over every stored edge.
pub fn union_find_roots(g: &CsrGraph) -> Vec<usize> {
    let n = g.num_nodes();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for u in g.vertices() {
        for &v in g.out_neigh(u) {
            let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// Relabels a partition so each class is named by its smallest member.
pub fn canonical_partition<T: Copy + Eq + std::hash::Hash>(labels: &[T]) -> Vec<usize> {
    let mut first = std::collections::HashMap::new();
    labels
        .iter()
        .enumerate()
        .map(|(v, l)| *first.entry(*l).or_insert(v))
        .collect()
}
