use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use super::coupling::{Coupling, OrdF64};
use super::simplex::exact_rational;
use crate::error::{Error, Result};

/// Largest `n` accepted by [`exchangeable_permute`].
pub const MAX_EXACT_N: usize = 8;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Average of the coupling over all `n!` coordinate permutations.
///
/// Identical permuted tuples are merged, so an exchangeable input comes back
/// unchanged up to support order.
pub fn exchangeable_permute(coupling: &Coupling) -> Result<Coupling> {
    let n = coupling.n;
    if n > MAX_EXACT_N {
        return Err(Error::TooLarge {
            what: "coordinates for exact symmetrization",
            size: n,
            limit: MAX_EXACT_N,
        });
    }
    let perms = permutations(n);
    let scale = 1.0 / perms.len() as f64;
    let mut acc: BTreeMap<Vec<OrdF64>, f64> = BTreeMap::new();
    for (row, &w) in coupling.support.iter().zip(&coupling.weights) {
        for p in &perms {
            let key: Vec<OrdF64> = p.iter().map(|&j| OrdF64(row[j])).collect();
            *acc.entry(key).or_insert(0.0) += w * scale;
        }
    }
    let (support, weights) = acc
        .into_iter()
        .map(|(k, w)| (k.into_iter().map(|v| v.0).collect(), w))
        .unzip();
    Coupling::new(n, support, weights, coupling.residual_mass)
}

/// Exact marginal of the symmetrized coupling: `(1/n) Σ_i` projection `i`,
/// with the stored weights read as exact rationals.
pub fn symmetrized_marginal_exact(coupling: &Coupling) -> Vec<(f64, BigRational)> {
    let n = BigRational::from_integer(coupling.n.into());
    let mut acc: BTreeMap<OrdF64, BigRational> = BTreeMap::new();
    for (row, &w) in coupling.support.iter().zip(&coupling.weights) {
        let w = exact_rational(w);
        for &v in row {
            let e = acc.entry(OrdF64(v)).or_insert_with(BigRational::zero);
            *e += w.clone();
        }
    }
    acc.into_iter().map(|(k, p)| (k.0, p / n.clone())).collect()
}

/// `count` rows drawn from the coupling, each with an independent uniform
/// coordinate permutation. Residual mass is ignored (rows are drawn from
/// the normalized listed support).
pub fn exchangeable_sample<R: Rng + ?Sized>(
    coupling: &Coupling,
    rng: &mut R,
    count: usize,
) -> Vec<Vec<f64>> {
    let total: f64 = coupling.weights.iter().sum();
    let mut cum = Vec::with_capacity(coupling.len());
    let mut acc = 0.0;
    for &w in &coupling.weights {
        acc += w / total;
        cum.push(acc);
    }
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let i = cum.partition_point(|&c| c <= u).min(coupling.len() - 1);
            let mut row = coupling.support[i].clone();
            row.shuffle(rng);
            row
        })
        .collect()
}
