use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use mixcenter::discrete_mix::{ex01_couplings, lp_feasible_center, FeasibilityOptions};
use mixcenter_bench::finite_marginals;

pub fn bench_feasible(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp_feasible_center n=3");
    for atoms in [4, 8, 16] {
        let ms = finite_marginals(3, atoms);
        let center = 1.5 * (atoms - 1) as f64;
        group.bench_with_input(BenchmarkId::from_parameter(atoms), &ms, |b, ms| {
            b.iter(|| {
                lp_feasible_center(black_box(ms), center, FeasibilityOptions::default()).unwrap()
            })
        });
    }
    group.finish();
}

pub fn bench_ex01(c: &mut Criterion) {
    c.bench_function("ex01_couplings K=20", |b| {
        b.iter(|| ex01_couplings(black_box(20)).unwrap())
    });
}
