use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use blackbody_decomp::decomposition::{cf_factorization_residual, planck_log_pmf_via_binaries, FactorizationKind};
use blackbody_decomp::report::{example_union, factorization_truncation};
use blackbody_decomp::sampling::{default_s_max, sample, sample_coupled, RandomStream, SampledLaw};
use blackbody_decomp::thermodynamics::{entropy_additivity_residuals, fluctuation_series, FluctuationKind};
use blackbody_decomp::{event_probability, VariableFamily};
use blackbody_decomp_bench::{cf_grid, mode, BENCH_BETAS};

fn cf_factorization(c: &mut Criterion) {
    let grid = cf_grid();
    let mut group = c.benchmark_group("cf_factorization");
    for kind in FactorizationKind::ALL {
        group.bench_function(kind.name(), |b| {
            let p = mode(1.0);
            b.iter(|| cf_factorization_residual(kind, black_box(&grid), &p, factorization_truncation(kind)))
        });
    }
    group.finish();
}

fn events(c: &mut Criterion) {
    let mut group = c.benchmark_group("event_probability");
    for beta in BENCH_BETAS {
        let p = mode(beta);
        group.bench_with_input(BenchmarkId::new("planck_levels_0_1023", beta), &p, |b, p| {
            b.iter(|| (0..1024u64).map(|n| planck_log_pmf_via_binaries(n, p, 40).unwrap()).sum::<f64>())
        });
    }
    let union = example_union();
    let p = mode(1.0);
    group.bench_function("union_1_8_9", |b| b.iter(|| event_probability(black_box(&union), &p).unwrap()));
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampling_100k");
    group.sample_size(20);
    let p = mode(1.0);
    let laws = [
        SampledLaw::Family(VariableFamily::Gauss),
        SampledLaw::Family(VariableFamily::Dark),
        SampledLaw::Family(VariableFamily::Planck),
        SampledLaw::BinarySum { s_max: default_s_max(&p) },
    ];
    for law in laws {
        group.bench_function(law.to_string(), |b| {
            b.iter(|| sample(law, &p, 100_000, &mut RandomStream::new(42, 0)).unwrap())
        });
    }
    group.bench_function("coupled", |b| b.iter(|| sample_coupled(&p, 100_000, &mut RandomStream::new(42, 0)).unwrap()));
    group.finish();
}

fn entropy_sums(c: &mut Criterion) {
    let mut group = c.benchmark_group("component_sums");
    for beta in BENCH_BETAS {
        let p = mode(beta);
        group.bench_with_input(BenchmarkId::new("entropy_additivity", beta), &p, |b, p| {
            b.iter(|| entropy_additivity_residuals(p, 60, 2000))
        });
        group.bench_with_input(BenchmarkId::new("multiplet_fluctuations", beta), &p, |b, p| {
            b.iter(|| fluctuation_series(FluctuationKind::Multiplet, p, 2000).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cf_factorization, events, sampling, entropy_sums);
criterion_main!(benches);
