use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use teamgame_core::dynamics::{simulate, IntegratorConfig, Method};
use teamgame_core::experiments::{discrete_preset, sampled_preset, Preset, PresetParams};
use teamgame_core::operators::{build_operators, Regime, SampledOperators, SwitchedField};
use teamgame_core::spectral::{charpoly_binomial, charpoly_direct, compute_spectrum};

fn charpoly(c: &mut Criterion) {
    let mut g = c.benchmark_group("charpoly");
    for m in [8usize, 16, 23] {
        g.bench_with_input(BenchmarkId::new("direct", m), &m, |b, &m| {
            b.iter(|| charpoly_direct(black_box(m)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("binomial", m), &m, |b, &m| {
            b.iter(|| charpoly_binomial(black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum");
    for m in [10usize, 50, 100] {
        let ops = build_operators(m).unwrap();
        g.bench_with_input(BenchmarkId::new("constrained", m), &ops, |b, ops| {
            b.iter(|| compute_spectrum(ops, Regime::Constrained).unwrap())
        });
    }
    g.finish();
}

fn apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("apply");
    let params = PresetParams::default();
    let ops = build_operators(200).unwrap();
    let y = discrete_preset(Preset::Random, 200, &params).unwrap();
    let mut out = vec![0.0; 201];
    g.bench_function("discrete_200", |b| {
        b.iter(|| ops.apply_in(black_box(y.values()), Regime::Constrained, &mut out))
    });
    let f = sampled_preset(Preset::Random, 4096, &params).unwrap();
    let sops = SampledOperators::for_strategy(&f);
    let mut out = vec![0.0; f.samples().len()];
    g.bench_function("sampled_4096", |b| {
        b.iter(|| sops.apply_in(black_box(f.samples()), Regime::Constrained, &mut out))
    });
    g.finish();
}

fn integrate(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    let ops = build_operators(50).unwrap();
    let y = discrete_preset(Preset::Random, 50, &PresetParams::default()).unwrap();
    for method in [Method::Euler, Method::Rk4, Method::ClosedForm] {
        let cfg = IntegratorConfig::new(method, 1e-3, 1.0).unwrap();
        g.bench_function(BenchmarkId::new("m50_t1", method), |b| {
            b.iter(|| simulate(&ops, black_box(y.values()), &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, charpoly, spectrum, apply, integrate);
criterion_main!(benches);
