use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gapkit::kernels::{self, BfsConfig};
use gapkit_bench::{kron, sources, urand, with_weights};

const SCALE: u32 = 14;

fn bfs(c: &mut Criterion) {
    let mut group = c.benchmark_group("bfs");
    for (name, g) in [("kron", kron(SCALE)), ("urand", urand(SCALE))] {
        let src = sources(&g, 1)[0];
        for (mode, cfg) in [
            ("direction-optimizing", BfsConfig::default()),
            (
                "top-down",
                BfsConfig {
                    direction_optimizing: false,
                    ..BfsConfig::default()
                },
            ),
        ] {
            group.bench_with_input(BenchmarkId::new(mode, name), &g, |b, g| {
                b.iter(|| kernels::bfs_with(g, black_box(src), &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn sssp(c: &mut Criterion) {
    let g = with_weights(&urand(SCALE));
    let src = sources(&g, 1)[0];
    let mut group = c.benchmark_group("sssp");
    for delta in [1, 32, 256] {
        group.bench_with_input(BenchmarkId::new("delta", delta), &delta, |b, &d| {
            b.iter(|| kernels::sssp(&g, black_box(src), d).unwrap())
        });
    }
    group.finish();
}

fn whole_graph(c: &mut Criterion) {
    let g = kron(SCALE);
    let bc_sources = sources(&g, 4);
    c.bench_function("pr/kron", |b| {
        b.iter(|| {
            kernels::pagerank(
                &g,
                kernels::DEFAULT_DAMPING,
                kernels::DEFAULT_TOLERANCE,
                kernels::DEFAULT_MAX_ITERS,
            )
            .unwrap()
        })
    });
    c.bench_function("cc/kron", |b| {
        b.iter(|| kernels::connected_components(black_box(&g)))
    });
    c.bench_function("bc/kron", |b| {
        b.iter(|| kernels::betweenness(&g, black_box(&bc_sources)).unwrap())
    });
    c.bench_function("tc/kron", |b| {
        b.iter(|| kernels::triangle_count(black_box(&g)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bfs, sssp, whole_graph
}
criterion_main!(benches);
