use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use haarshift::audit::{audit_claims, Universe};
use haarshift::oracle::{smallest_singular, Constraint, DEFAULT_MAX_DIM};
use haarshift::{restricted_indicator_shift, restricted_shift, DyadicInterval};
use haarshift_bench::{random_function, representative_pairs};

fn indicator_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("restricted_indicator_shift");
    for (name, i, k) in representative_pairs() {
        group.bench_function(name, |b| b.iter(|| restricted_indicator_shift(black_box(&i), black_box(&k))));
    }
    group.finish();
}

fn function_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("restricted_shift");
    let i = DyadicInterval::new(4, 0);
    let k = DyadicInterval::new(1, 3);
    for depth in [4u32, 6, 8] {
        let f = random_function(i, depth, 7);
        group.bench_with_input(BenchmarkId::from_parameter(depth), &f, |b, f| {
            b.iter(|| restricted_shift(black_box(f), black_box(&k)))
        });
    }
    group.finish();
}

fn dense_svd(c: &mut Criterion) {
    let mut group = c.benchmark_group("smallest_singular");
    group.sample_size(10);
    let (i, k) = (DyadicInterval::new(0, 0), DyadicInterval::new(2, 0));
    for depth in [3u32, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, &d| {
            b.iter(|| smallest_singular(&i, &k, d, Constraint::None, DEFAULT_MAX_DIM).unwrap())
        });
    }
    group.finish();
}

fn small_audit(c: &mut Criterion) {
    let mut group = c.benchmark_group("audit");
    group.sample_size(10);
    let universe = Universe {
        min_scale: -2,
        max_scale: 2,
        max_index: 7,
        mirrored: true,
    };
    group.bench_function("scales -2..2", |b| b.iter(|| audit_claims(black_box(&universe), 2)));
    group.finish();
}

criterion_group!(benches, indicator_forms, function_forms, dense_svd, small_audit);
criterion_main!(benches);
