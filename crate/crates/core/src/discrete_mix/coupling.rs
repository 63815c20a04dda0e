use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::distributions::FiniteDiscrete;
use crate::error::{Error, Result};

/// Finitely supported law on `R^n`.
///
/// `residual_mass` is mass known to exist outside the listed support (for
/// truncated constructions); the weights plus it sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub n: usize,
    pub support: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub residual_mass: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl Coupling {
    /// Checks shapes, positivity and `Σ weights + residual_mass = 1`
    /// within 1e-12.
    pub fn new(
        n: usize,
        support: Vec<Vec<f64>>,
        weights: Vec<f64>,
        residual_mass: f64,
    ) -> Result<Self> {
        if n == 0 || support.len() != weights.len() {
            return Err(Error::Spec(format!(
                "coupling with n = {n}, {} tuples and {} weights",
                support.len(),
                weights.len()
            )));
        }
        if let Some(row) = support
            .iter()
            .find(|r| r.len() != n || r.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::Spec(format!(
                "bad support tuple {row:?} for n = {n}"
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0)) || !(0.0..1.0).contains(&residual_mass) {
            return Err(Error::Spec(
                "weights must be positive and the residual in [0, 1)".into(),
            ));
        }
        let total: f64 = weights.iter().sum::<f64>() + residual_mass;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Spec(format!("weights sum to {total}, not 1")));
        }
        Ok(Coupling {
            n,
            support,
            weights,
            residual_mass,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.support.iter().map(|r| r.iter().sum()).collect()
    }

    /// Projection on coordinate `i` as sorted `(value, mass)` pairs.
    pub fn marginal(&self, i: usize) -> Vec<(f64, f64)> {
        let mut acc: BTreeMap<OrdF64, f64> = BTreeMap::new();
        for (row, &w) in self.support.iter().zip(&self.weights) {
            *acc.entry(OrdF64(row[i])).or_insert(0.0) += w;
        }
        acc.into_iter().map(|(k, v)| (k.0, v)).collect()
    }

    /// Largest `|Σx - c|` over the support.
    pub fn max_sum_deviation(&self, c: f64) -> f64 {
        self.row_sums()
            .iter()
            .map(|s| (s - c).abs())
            .fold(0.0, f64::max)
    }

    /// Largest atom-wise difference between the projections and `marginals`.
    pub fn max_marginal_residual(&self, marginals: &[FiniteDiscrete]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, mu) in marginals.iter().enumerate() {
            let proj = self.marginal(i);
            for &(v, p) in &proj {
                worst = worst.max((p - mu.prob(v)).abs());
            }
            for &(v, p) in mu.atoms() {
                if !proj.iter().any(|&(u, _)| u == v) {
                    worst = worst.max(p);
                }
            }
        }
        worst
    }

    /// Certificate check: marginals within `marg_tol` per atom and every
    /// tuple summing to `c` within `sum_tol`.
    pub fn certify(
        &self,
        marginals: &[FiniteDiscrete],
        c: f64,
        sum_tol: f64,
        marg_tol: f64,
    ) -> Result<()> {
        if marginals.len() != self.n {
            return Err(Error::Invariant(format!(
                "coupling has n = {} but {} marginals were given",
                self.n,
                marginals.len()
            )));
        }
        let dev = self.max_sum_deviation(c);
        if dev > sum_tol {
            return Err(Error::Invariant(format!(
                "tuple sum deviates from {c} by {dev:e}"
            )));
        }
        let res = self.max_marginal_residual(marginals);
        if res > marg_tol {
            return Err(Error::Invariant(format!(
                "marginal residual {res:e} exceeds {marg_tol:e}"
            )));
        }
        Ok(())
    }
}

/// Total order on finite floats for map keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
