use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use semiexp::capacity::capacity_with_rng;
use semiexp::limit::{sample_limit, MarkMode};
use semiexp::process::simulate_process;
use semiexp::rng::stream;
use semiexp::subordinator::PassageSampler;
use semiexp::zeroset::sample_zero_set;
use semiexp::{ModelParams, StepLaw};

fn zero_sets(c: &mut Criterion) {
    let law = StepLaw::from_params(&ModelParams::default()).unwrap();
    let mut g = c.benchmark_group("sample_zero_set");
    for n in [1_000u64, 100_000, 10_000_000] {
        let mut rng = stream(1, 0);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| black_box(sample_zero_set(n, &law, &mut rng)))
        });
    }
    g.finish();
}

fn passage(c: &mut Criterion) {
    let s = PassageSampler::new(0.25).unwrap();
    let mut rng = stream(2, 0);
    let levels = [0.25, 0.5, 0.75, 1.0];
    c.bench_function("passage_times/4 levels", |b| {
        b.iter(|| black_box(s.passage_times(0.0, &levels, &mut rng)))
    });
}

fn capacity(c: &mut Criterion) {
    let law = StepLaw::from_params(&ModelParams::default()).unwrap();
    let mut rng = stream(3, 0);
    let set = sample_zero_set(100_000, &law, &mut rng);
    c.bench_function("capacity/zero set n=1e5, 100 walks per point", |b| {
        b.iter(|| black_box(capacity_with_rng(set.points(), &law, 100, &mut rng)))
    });
}

fn limit(c: &mut Criterion) {
    let p = ModelParams::default();
    let mode = MarkMode::Profile { levels: vec![0.5, 1.0] };
    let mut rng = stream(4, 0);
    c.bench_function("sample_limit/K=I=60 profile", |b| {
        b.iter(|| black_box(sample_limit(&p, 60, 60, &mode, &mut rng).unwrap()))
    });
}

fn process(c: &mut Criterion) {
    let p = ModelParams::default();
    let law = StepLaw::from_params(&p).unwrap();
    let mut g = c.benchmark_group("simulate_process");
    g.sample_size(10);
    for n in [1_000u64, 100_000] {
        let mut rng = stream(5, 0);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| black_box(simulate_process(n, &law, &p, &mut rng).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, zero_sets, passage, capacity, limit, process);
criterion_main!(benches);
