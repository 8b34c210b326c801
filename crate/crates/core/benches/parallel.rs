use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hamlie::lab::{density, escan, Execution, ExperimentConfig};

fn config(execution: Execution, samples: usize) -> ExperimentConfig {
    ExperimentConfig { execution, ..ExperimentConfig::new(5, 1, 2, 1, samples) }
}

fn bench_density(c: &mut Criterion) {
    let mut group = c.benchmark_group("density_q25");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let cfg = config(exec, 5000);
        group.bench_function(name, |b| b.iter(|| density(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

fn bench_escan(c: &mut Criterion) {
    let mut group = c.benchmark_group("escan_q25");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let cfg = config(exec, 1);
        group.bench_function(name, |b| b.iter(|| escan(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_density, bench_escan);
criterion_main!(benches);
