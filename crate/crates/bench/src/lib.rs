//! Shared inputs for the benchmarks.

use mixcenter::distributions::{FiniteDiscrete, Uniform};
use mixcenter::rearrangement::{discretize, QuantileMatrix};

/// Three shuffled copies of the `m`-point uniform discretization.
pub fn uniform_matrix(m: usize, seed: u64) -> QuantileMatrix {
    let u = Uniform::new(0.0, 1.0).expect("valid bounds");
    let col = discretize(&u, m).expect("finite quantiles");
    QuantileMatrix::shuffled(vec![col.clone(), col.clone(), col], seed).expect("finite values")
}

/// `n` copies of the uniform law on `{0, 1, …, atoms - 1}`.
pub fn finite_marginals(n: usize, atoms: usize) -> Vec<FiniteDiscrete> {
    let p = 1.0 / atoms as f64;
    let law = FiniteDiscrete::new((0..atoms).map(|i| (i as f64, p)).collect()).expect("valid law");
    vec![law; n]
}
