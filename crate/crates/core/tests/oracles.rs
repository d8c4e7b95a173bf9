mod common;

use common::*;
use gapkit::kernels::{self, BfsConfig};
use gapkit::sources::pick_sources;
use gapkit::verify;
use gapkit::{assign_weights, build_csr, generate, relabel_by_degree, GenSpec, DEFAULT_SEED};

#[test]
fn bfs_verifies_from_64_sources() {
    for (name, g) in test_graphs() {
        let sources = pick_sources(&g, 64, DEFAULT_SEED).unwrap();
        for cfg in [
            BfsConfig::default(),
            BfsConfig {
                direction_optimizing: false,
                ..BfsConfig::default()
            },
            BfsConfig {
                degree_in_parent: false,
                ..BfsConfig::default()
            },
        ] {
            for &s in &sources {
                let parent = kernels::bfs_with(&g, s, &cfg).unwrap();
                let r = verify::verify_bfs(&g, s, &parent);
                assert!(
                    r.ok(),
                    "{name} source {s} {cfg:?}: {:?}",
                    r.failure_detail()
                );
            }
        }
    }
}

#[test]
fn bfs_on_directed_kron() {
    let g = build_csr(&generate(&GenSpec::kronecker(10)).unwrap(), true, false).unwrap();
    for s in pick_sources(&g, 16, 3).unwrap() {
        let parent = kernels::bfs(&g, s, 15.0, 18.0).unwrap();
        assert!(verify::verify_bfs(&g, s, &parent).ok());
    }
}

#[test]
fn sssp_equals_dijkstra() {
    let g = build_csr(
        &assign_weights(generate(&GenSpec::uniform(12)).unwrap(), DEFAULT_SEED).unwrap(),
        false,
        true,
    )
    .unwrap();
    for s in pick_sources(&g, 64, DEFAULT_SEED).unwrap() {
        let expected = verify::dijkstra(&g, s);
        for delta in [1, 32] {
            assert_eq!(
                kernels::sssp(&g, s, delta).unwrap(),
                expected,
                "source {s} delta {delta}"
            );
        }
    }
}

#[test]
fn sssp_on_weighted_test_graphs() {
    for (name, g) in test_graphs() {
        let el = assign_weights(g.to_edge_list(), 11).unwrap();
        let w = build_csr(&el, false, false).unwrap();
        for s in pick_sources(&w, 64, DEFAULT_SEED).unwrap() {
            for delta in [1, 32] {
                let d = kernels::sssp(&w, s, delta).unwrap();
                assert!(verify::verify_sssp(&w, s, &d).ok(), "{name} {s} {delta}");
            }
        }
    }
}

#[test]
fn sssp_many_workers_directed() {
    let el = assign_weights(generate(&GenSpec::kronecker(11)).unwrap(), 5).unwrap();
    let g = build_csr(&el, true, false).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(6)
        .build()
        .unwrap();
    for s in pick_sources(&g, 8, 1).unwrap() {
        let d = pool.install(|| kernels::sssp(&g, s, 16)).unwrap();
        assert_eq!(d, verify::dijkstra(&g, s));
    }
}

#[test]
fn cc_partition_equals_union_find() {
    for (name, g) in test_graphs() {
        let labels = kernels::connected_components(&g);
        assert_eq!(
            canonical_partition(&labels),
            canonical_partition(&union_find_roots(&g)),
            "{name}"
        );
        assert!(verify::verify_cc(&g, &labels).ok());
    }
    // directed input: weakly connected components
    let d = build_csr(
        &generate(&GenSpec::uniform(10).with_degree(1)).unwrap(),
        true,
        false,
    )
    .unwrap();
    let labels = kernels::connected_components(&d);
    assert_eq!(
        canonical_partition(&labels),
        canonical_partition(&union_find_roots(&d))
    );
}

#[test]
fn tc_equals_brute_force() {
    for (name, g) in test_graphs() {
        let count = kernels::triangle_count(&g).unwrap();
        assert_eq!(count, verify::brute_force_triangles(&g), "{name}");
        assert_eq!(kernels::ordered_count(&g), count);
    }
    assert_eq!(kernels::triangle_count(&clique(5)).unwrap(), 10);
}

#[test]
fn tc_invariant_under_relabel() {
    let g = kron(10);
    let (r, _) = relabel_by_degree(&g).unwrap();
    let oracle = verify::brute_force_triangles(&g);
    assert_eq!(verify::brute_force_triangles(&r), oracle);
    assert_eq!(kernels::ordered_count(&r), oracle);
    assert_eq!(kernels::ordered_count(&g), oracle);
}

#[test]
fn bc_matches_serial_brandes() {
    for (name, g) in test_graphs() {
        for trial in 0..4u64 {
            let sources = pick_sources(&g, 4, DEFAULT_SEED + trial).unwrap();
            let scores = kernels::betweenness(&g, &sources).unwrap();
            let r = verify::verify_bc(&g, &sources, &scores);
            assert!(r.ok(), "{name}: {:?}", r.failure_detail());
        }
    }
}

#[test]
fn bc_scores_in_unit_interval() {
    let g = kron(10);
    let sources = pick_sources(&g, 4, DEFAULT_SEED).unwrap();
    let scores = kernels::betweenness(&g, &sources).unwrap();
    assert!(scores.iter().all(|&s| (0.0..=1.0).contains(&s)));
    assert!(scores.contains(&1.0));
}

#[test]
fn pr_kron10_verifies() {
    let g = kron(10);
    let pr = kernels::pagerank(&g, 0.85, 1e-4, 20).unwrap();
    assert!(
        pr.converged,
        "{} iterations, change {}",
        pr.iterations, pr.last_change
    );
    assert!(verify::verify_pr(&g, &pr.scores, 0.85, 1e-4).ok());
}

#[test]
fn pr_uniform_scores_fail_on_skewed_graph() {
    let g = kron(8);
    let n = g.num_nodes();
    let uniform = vec![1.0 / n as f32; n];
    let change = verify::pagerank_change(&g, &uniform, 0.85);
    assert!(change >= 1e-4, "change {change}");
    assert!(!verify::verify_pr(&g, &uniform, 0.85, 1e-4).ok());
}

#[test]
fn pr_scores_sum_to_one_without_sinks() {
    for g in [urand(10), ring(40), clique(5)] {
        assert!(g.vertices().all(|v| g.out_degree(v) > 0));
        let pr = kernels::pagerank(&g, 0.85, 1e-4, 100).unwrap();
        let sum: f64 = pr.scores.iter().map(|&s| s as f64).sum();
        assert!((sum - 1.0).abs() < 1e-3, "sum {sum}");
        assert!(pr.scores.iter().all(|&s| s > 0.0));
    }
}

#[test]
fn worth_relabelling_on_synthetic_graphs() {
    assert!(!kernels::worth_relabelling(&ring(100)));
    assert!(!kernels::worth_relabelling(&urand(16)));
    assert!(kernels::worth_relabelling(&kron(16)));
}

#[test]
fn kernels_leave_graph_untouched() {
    let g = kron(9);
    let before = g.clone();
    let s = pick_sources(&g, 4, 1).unwrap();
    kernels::bfs(&g, s[0], 15.0, 18.0).unwrap();
    kernels::pagerank(&g, 0.85, 1e-4, 20).unwrap();
    kernels::connected_components(&g);
    kernels::betweenness(&g, &s).unwrap();
    kernels::triangle_count(&g).unwrap();
    assert_eq!(g, before);
}
