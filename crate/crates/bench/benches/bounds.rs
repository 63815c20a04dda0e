use std::hint::black_box;

use criterion::Criterion;
use mixcenter::center_bounds::{cm_bounds, dual_bound};
use mixcenter::distributions::Cauchy;

pub fn bench_cm_bounds(c: &mut Criterion) {
    let mu = Cauchy::standard();
    c.bench_function("cm_bounds cauchy n=3", |b| {
        b.iter(|| cm_bounds(black_box(&mu), 3).unwrap())
    });
}

pub fn bench_dual_bound(c: &mut Criterion) {
    let mu = Cauchy::standard();
    c.bench_function("dual_bound cauchy n=3 c=0.1", |b| {
        b.iter(|| dual_bound(black_box(&mu), 3, 0.1).unwrap())
    });
}
