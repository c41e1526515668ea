use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use golomb_bench::refutation_bounds;
use golomb_core::bounds::lp_bounding_round;
use golomb_core::cp::{build_forbidden_tables, search, SearchConfig};
use golomb_core::milp_d::{solve_d_formulation, DConfig};
use golomb_core::qip::{bron_kerbosch, max_marks_within, QipConfig};
use golomb_core::OptimaTable;

fn refute(c: &mut Criterion) {
    let mut g = c.benchmark_group("refute-below-optimum");
    g.sample_size(10);
    for n in [6, 7, 8] {
        let b = refutation_bounds(n);
        let optima = OptimaTable::standard().truncated(n - 1);
        g.bench_with_input(BenchmarkId::new("cp", n), &b, |bench, b| {
            bench.iter(|| {
                let tables = build_forbidden_tables(b, 3);
                search(black_box(b), &tables, &SearchConfig::feasibility()).unwrap()
            })
        });
        g.bench_with_input(BenchmarkId::new("qip", n), &b, |bench, b| {
            let config = QipConfig {
                pin_end: true,
                ..QipConfig::default()
            };
            bench.iter(|| max_marks_within(b.length(), n, &optima, Some(black_box(b)), &config).unwrap())
        });
        if n <= 7 {
            g.bench_with_input(BenchmarkId::new("d", n), &b, |bench, b| {
                bench.iter(|| solve_d_formulation(black_box(b), &DConfig::default()).unwrap())
            });
        }
    }
    g.finish();
}

fn lp_round(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp-bounding-round");
    g.sample_size(10);
    for n in [5, 6] {
        let b = refutation_bounds(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &b, |bench, b| {
            bench.iter(|| lp_bounding_round(black_box(b)).unwrap())
        });
    }
    g.finish();
}

fn cliques(c: &mut Criterion) {
    // circulant graph on 60 vertices: i ~ j when |i - j| mod 60 is in {1, 2, 5, 9}
    let vertices: Vec<usize> = (0..60).collect();
    let mut edges = Vec::new();
    for i in 0..60 {
        for s in [1, 2, 5, 9] {
            edges.push((i, (i + s) % 60));
        }
    }
    c.bench_function("bron-kerbosch-circulant-60", |bench| {
        bench.iter(|| bron_kerbosch(black_box(&vertices), &edges))
    });
}

criterion_group!(benches, refute, lp_round, cliques);
criterion_main!(benches);
