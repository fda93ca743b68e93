use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use sconv::crosscheck::matrix_tree_to_root;
use sconv::enumerate::{acyclic_count, gamma_table, EnumOptions};
use sconv_bench::generated;

fn bench_gamma_table(c: &mut Criterion) {
    // 25 arcs on 7 vertices: a full exhaustive pass per iteration
    let d = generated(7, 8, 4, 5);
    let mut group = c.benchmark_group("gamma_table");
    group.sample_size(20);
    for workers in [1usize, 4] {
        let opts = EnumOptions {
            workers,
            ..Default::default()
        };
        group.bench_function(format!("{}arcs_w{workers}", d.arc_count()), |b| {
            b.iter(|| gamma_table(black_box(&d), &opts).unwrap())
        });
    }
    group.finish();
}

fn bench_acyclic_count(c: &mut Criterion) {
    let d = generated(7, 10, 4, 5);
    let opts = EnumOptions::default();
    let mut group = c.benchmark_group("acyclic_count");
    group.sample_size(20);
    group.bench_function(format!("{}arcs", d.arc_count()), |b| {
        b.iter(|| acyclic_count(black_box(&d), &opts).unwrap())
    });
    group.finish();
}

fn bench_matrix_tree(c: &mut Criterion) {
    // dense input with a large nonzero determinant: the bidirected complete
    // graph on 10 vertices has 10^8 arborescences to any root
    let d = sconv_bench::complete_bidirected(10);
    c.bench_function("matrix_tree_k10_bidirected", |b| {
        b.iter(|| {
            let n = matrix_tree_to_root(black_box(&d), 0).unwrap();
            assert_eq!(n, 100_000_000);
            n
        })
    });
}

criterion_group!(
    benches,
    bench_gamma_table,
    bench_acyclic_count,
    bench_matrix_tree
);
criterion_main!(benches);
