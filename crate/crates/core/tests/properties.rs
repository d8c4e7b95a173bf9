mod common;

use common::*;
use gapkit::io::{read_serialized_from, write_serialized_to};
use gapkit::kernels;
use gapkit::verify;
use gapkit::{build_csr, relabel_by_degree, CsrGraph, EdgeList, NodeId, Weight};
use proptest::prelude::*;

fn edges(max_n: NodeId, max_m: usize) -> impl Strategy<Value = Vec<(NodeId, NodeId)>> {
    (1..=max_n).prop_flat_map(move |n| proptest::collection::vec((0..n, 0..n), 0..max_m))
}

fn weighted_edges(
    max_n: NodeId,
    max_m: usize,
) -> impl Strategy<Value = Vec<(NodeId, NodeId, Weight)>> {
    (1..=max_n).prop_flat_map(move |n| proptest::collection::vec((0..n, 0..n, 1..=255), 1..max_m))
}

fn check_invariants(g: &CsrGraph) {
    let offs = g.outgoing().offsets();
    assert_eq!(offs[0], 0);
    assert_eq!(offs[g.num_nodes()] as usize, g.num_edges());
    let degree_sum: usize = g.vertices().map(|v| g.out_degree(v)).sum();
    assert_eq!(degree_sum, g.num_edges());
    for u in g.vertices() {
        let ns = g.out_neigh(u);
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
        for &v in ns {
            assert_ne!(u, v);
            if g.is_directed() {
                assert!(g.in_neigh(v).binary_search(&u).is_ok());
            } else {
                assert!(g.has_edge(v, u));
            }
        }
    }
}

fn degree_multiset(g: &CsrGraph) -> Vec<usize> {
    let mut d: Vec<_> = g.vertices().map(|v| g.out_degree(v)).collect();
    d.sort_unstable();
    d
}

fn partition_sizes(g: &CsrGraph) -> Vec<usize> {
    let mut sizes = std::collections::HashMap::new();
    for l in kernels::connected_components(g) {
        *sizes.entry(l).or_insert(0) += 1;
    }
    let mut s: Vec<_> = sizes.into_values().collect();
    s.sort_unstable();
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_graphs_satisfy_invariants(pairs in edges(40, 200), directed in any::<bool>()) {
        let g = build_csr(&EdgeList::from_pairs(pairs), directed, false).unwrap();
        check_invariants(&g);
    }

    #[test]
    fn build_is_idempotent(pairs in edges(40, 200), directed in any::<bool>()) {
        let g = build_csr(&EdgeList::from_pairs(pairs), directed, false).unwrap();
        let again = build_csr(&g.to_edge_list(), directed, false).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn serialization_round_trip(wedges in weighted_edges(30, 150), directed in any::<bool>()) {
        let g = build_csr(&EdgeList::from_weighted(&wedges), directed, false).unwrap();
        let mut bytes = Vec::new();
        write_serialized_to(&g, &mut bytes).unwrap();
        prop_assert_eq!(read_serialized_from(&mut bytes.as_slice()).unwrap(), g);
    }

    #[test]
    fn relabel_preserves_structure(pairs in edges(40, 200)) {
        let g = build_csr(&EdgeList::from_pairs(pairs), false, true).unwrap();
        let (r, perm) = relabel_by_degree(&g).unwrap();
        check_invariants(&r);
        prop_assert_eq!(r.num_edges(), g.num_edges());
        prop_assert_eq!(degree_multiset(&r), degree_multiset(&g));
        prop_assert_eq!(verify::brute_force_triangles(&r), verify::brute_force_triangles(&g));
        prop_assert_eq!(partition_sizes(&r), partition_sizes(&g));
        for u in g.vertices() {
            for &v in g.out_neigh(u) {
                prop_assert!(r.has_edge(perm.new_id(u), perm.new_id(v)));
            }
        }
        let degrees: Vec<_> = r.vertices().map(|v| r.out_degree(v)).collect();
        prop_assert!(degrees.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn sssp_matches_dijkstra(wedges in weighted_edges(30, 150), delta in 1u32..64, directed in any::<bool>()) {
        let g = build_csr(&EdgeList::from_weighted(&wedges), directed, false).unwrap();
        let s = wedges[0].0;
        prop_assert_eq!(kernels::sssp(&g, s, delta).unwrap(), verify::dijkstra(&g, s));
    }

    #[test]
    fn cc_matches_union_find(pairs in edges(60, 80), directed in any::<bool>()) {
        let g = build_csr(&EdgeList::from_pairs(pairs), directed, false).unwrap();
        let labels = kernels::connected_components(&g);
        prop_assert_eq!(canonical_partition(&labels), canonical_partition(&union_find_roots(&g)));
    }

    #[test]
    fn tc_matches_brute_force(pairs in edges(25, 200)) {
        let g = build_csr(&EdgeList::from_pairs(pairs), false, true).unwrap();
        prop_assert_eq!(kernels::triangle_count(&g).unwrap(), verify::brute_force_triangles(&g));
    }

    #[test]
    fn bfs_and_bc_verify(pairs in edges(40, 120), directed in any::<bool>(), pick in any::<prop::sample::Index>()) {
        let g = build_csr(&EdgeList::from_pairs(pairs), directed, false).unwrap();
        let candidates: Vec<NodeId> = g.vertices().filter(|&v| g.out_degree(v) > 0).collect();
        prop_assume!(!candidates.is_empty());
        let s = candidates[pick.index(candidates.len())];
        let parent = kernels::bfs(&g, s, 15.0, 18.0).unwrap();
        prop_assert!(verify::verify_bfs(&g, s, &parent).ok());
        let scores = kernels::betweenness(&g, &[s]).unwrap();
        prop_assert!(verify::verify_bc(&g, &[s], &scores).ok());
    }
}
