use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use idsample_bench::synthetic;
use idsample_core::pca::symmetric_eigen;
use idsample_core::{
    compare_all_features, fit_pca, get_balanced_sample, get_sample, PcaOptions, SampleRecipe,
};
use ndarray::Array2;

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampling");
    for rows in [10_000, 100_000] {
        let ds = synthetic(rows, 8, 5);
        let recipe = SampleRecipe::with_seed(1);
        group.bench_with_input(BenchmarkId::new("get_sample_half", rows), &ds, |b, ds| {
            b.iter(|| get_sample(black_box(ds), rows / 2, &recipe).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("get_balanced_sample", rows),
            &ds,
            |b, ds| b.iter(|| get_balanced_sample(black_box(ds), &recipe).unwrap()),
        );
    }
    group.finish();
}

fn pca(c: &mut Criterion) {
    let mut group = c.benchmark_group("pca");
    for d in [10, 40] {
        let m = Array2::from_shape_fn((d, d), |(i, j)| 1.0 / (1 + i + j) as f64);
        group.bench_with_input(BenchmarkId::new("jacobi", d), &m, |b, m| {
            b.iter(|| symmetric_eigen(black_box(m)).unwrap())
        });
    }
    let ds = synthetic(50_000, 40, 5);
    group.bench_function("fit_50k_x_40", |b| {
        b.iter(|| fit_pca(black_box(&ds), PcaOptions::default()).unwrap())
    });
    group.finish();
}

fn ztest(c: &mut Criterion) {
    let ds = synthetic(100_000, 40, 5);
    let sample = get_sample(&ds, 50_000, &SampleRecipe::with_seed(2))
        .unwrap()
        .dataset;
    c.bench_function("compare_all_features_100k_x_40", |b| {
        b.iter(|| compare_all_features(black_box(&ds), black_box(&sample), 0.05).unwrap())
    });
}

criterion_group!(benches, sampling, pca, ztest);
criterion_main!(benches);
