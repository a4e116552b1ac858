use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use scalecalc_core::fourier::gram_matrix;
use scalecalc_core::growth::star;
use scalecalc_core::spectral::{enumerate_spectrum, shifted_growth, weyl_fit};
use scalecalc_core::{GrowthFunction, ManifoldModel};

fn enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    for spec in ["circle", "torus:2", "torus:3", "sphere:2", "sphere:4"] {
        let model: ManifoldModel = spec.parse().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(spec), &model, |b, &m| {
            b.iter(|| enumerate_spectrum(m, black_box(10_000)).unwrap());
        });
    }
    group.finish();
}

fn merge(c: &mut Criterion) {
    let t2 = shifted_growth(&enumerate_spectrum(ManifoldModel::torus(2).unwrap(), 20_000).unwrap()).unwrap();
    let mono = GrowthFunction::monomial(2.0).unwrap();
    let mut group = c.benchmark_group("star");
    for n in [1_000usize, 10_000] {
        group.bench_with_input(BenchmarkId::new("power_laws", n), &n, |b, &n| {
            b.iter(|| star(&mono, &mono, n).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("spectrum_power_law", n), &n, |b, &n| {
            b.iter(|| star(&t2, &mono, n).unwrap());
        });
    }
    group.finish();
}

fn fit(c: &mut Criterion) {
    let s = enumerate_spectrum(ManifoldModel::torus(3).unwrap(), 10_000).unwrap();
    c.bench_function("weyl_fit/torus:3/10000", |b| b.iter(|| weyl_fit(black_box(&s), 0.5).unwrap()));
}

fn gram(c: &mut Criterion) {
    let mut group = c.benchmark_group("gram");
    for modes in [8usize, 32] {
        let idx: Vec<usize> = (1..=modes).collect();
        group.bench_with_input(BenchmarkId::new("k3", modes), &idx, |b, idx| {
            b.iter(|| gram_matrix(idx, 3).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, enumerate, merge, fit, gram);
criterion_main!(benches);
