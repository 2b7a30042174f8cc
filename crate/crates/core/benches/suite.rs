use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ucl_core::par::Parallelism;
use ucl_core::suite::{default_corpus, run_suite, SuiteOptions};

fn suite(c: &mut Criterion) {
    let specs = default_corpus(7, 200);
    let mut group = c.benchmark_group("verify-200");
    group.sample_size(10);
    for mode in [Parallelism::Sequential, Parallelism::Parallel] {
        let opts = SuiteOptions {
            parallelism: mode,
            ..SuiteOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{mode:?}")), &opts, |b, opts| {
            b.iter(|| run_suite(&specs, Some(7), opts))
        });
    }
    group.finish();
}

criterion_group!(benches, suite);
criterion_main!(benches);
