use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use stallings_core::case_engine::{fuzz_theorem, verify_tables};
use stallings_core::parallel::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fuzz(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz_theorem");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 2000), &exec, |b, &exec| {
            b.iter(|| black_box(fuzz_theorem(2000, 3, 6, 7, exec)))
        });
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_tables");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(verify_tables(exec).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, fuzz, tables);
criterion_main!(benches);
