use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use es_core::dist::ProcessSpec;
use es_core::mc::{run_trials, Executor, ExperimentSpec};
use es_core::{CorruptionModel, DistributionSpec, EstimatorConfig, RiskLevel};

fn spec(trials: usize) -> ExperimentSpec {
    ExperimentSpec {
        process: ProcessSpec::Iid {
            dist: DistributionSpec::pareto(1.0, 2.2).unwrap(),
        },
        estimator: EstimatorConfig::default(),
        alpha: RiskLevel::new(0.1).unwrap(),
        sample_sizes: vec![3250],
        delta: 1.0,
        trials,
        master_seed: 1,
        corruption: CorruptionModel::None,
        truth: 0.0,
    }
}

fn executors(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_trials");
    group.sample_size(10);
    let spec = spec(2000);
    let mut cases = vec![("sequential", Executor::Sequential)];
    if cfg!(feature = "parallel") {
        cases.push(("parallel", Executor::Parallel { workers: 0 }));
    }
    for (name, executor) in cases {
        group.bench_with_input(BenchmarkId::new(name, 3250), &executor, |b, &executor| {
            b.iter(|| run_trials(black_box(&spec), 3250, executor).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, executors);
criterion_main!(benches);
