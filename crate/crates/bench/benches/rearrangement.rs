use criterion::{BatchSize, BenchmarkId, Criterion};
use mixcenter::rearrangement::{ra_flatten, RaOptions};
use mixcenter_bench::uniform_matrix;

pub fn bench_ra_flatten(c: &mut Criterion) {
    let mut group = c.benchmark_group("ra_flatten uniform x3");
    for m in [64, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter_batched(
                || uniform_matrix(m, 42),
                |matrix| ra_flatten(matrix, RaOptions::default()),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}
