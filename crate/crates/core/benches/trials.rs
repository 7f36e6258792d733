//! Sequential vs rayon trial fan-out on a reduced general-profile sweep.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use matchbandit::harness::{run_experiment, ExperimentConfig, Parallelism};

fn sweep(trials: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::reference_sweep();
    cfg.budgets = vec![400, 1600, 6400];
    cfg.trials = trials;
    cfg
}

fn bench_fan_out(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_experiment");
    group.sample_size(10);
    for trials in [16, 64] {
        let cfg = sweep(trials);
        group.bench_with_input(BenchmarkId::new("sequential", trials), &cfg, |b, cfg| {
            b.iter(|| run_experiment(black_box(cfg), Parallelism::SEQUENTIAL).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", trials), &cfg, |b, cfg| {
            b.iter(|| run_experiment(black_box(cfg), Parallelism::ALL_CORES).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_fan_out);
criterion_main!(benches);
