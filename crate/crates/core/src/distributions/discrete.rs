use serde::{Deserialize, Serialize};

use super::{atomic_survival_integral, plateau_integral, Distribution, MeanStatus};
use crate::error::{Error, Result};

/// Law with finitely many atoms. Values are kept strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct FiniteDiscrete {
    atoms: Vec<(f64, f64)>,
    cum: Vec<f64>,
}

impl FiniteDiscrete {
    /// Builds the law from `(value, probability)` pairs in any order.
    /// Repeated values are merged; probabilities must be positive and sum
    /// to one within 1e-12.
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Spec("finite law needs at least one atom".into()));
        }
        for &(v, p) in &atoms {
            if !v.is_finite() || !(p > 0.0 && p <= 1.0) {
                return Err(Error::Spec(format!("bad atom ({v}, {p})")));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (v, p) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += p,
                _ => merged.push((v, p)),
            }
        }
        let total: f64 = merged.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Spec(format!("probabilities sum to {total}, not 1")));
        }
        let mut cum = Vec::with_capacity(merged.len());
        let mut acc = 0.0;
        for &(_, p) in &merged {
            acc += p;
            cum.push(acc);
        }
        *cum.last_mut().unwrap() = 1.0;
        Ok(FiniteDiscrete { atoms: merged, cum })
    }

    pub fn point(value: f64) -> Self {
        FiniteDiscrete {
            atoms: vec![(value, 1.0)],
            cum: vec![1.0],
        }
    }

    /// `(k δ_x + (n-k) δ_y) / n`.
    pub fn two_point(n: usize, k: usize, x: f64, y: f64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::Spec(format!(
                "two-point family needs 1 <= k < n, got k={k}, n={n}"
            )));
        }
        FiniteDiscrete::new(vec![
            (x, k as f64 / n as f64),
            (y, (n - k) as f64 / n as f64),
        ])
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.0)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Probability of the atom at `v` (0 when `v` is not an atom).
    pub fn prob(&self, v: f64) -> f64 {
        self.atoms
            .binary_search_by(|a| a.0.total_cmp(&v))
            .map(|i| self.atoms[i].1)
            .unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(v, p)| v * p).sum()
    }

    pub fn min(&self) -> f64 {
        self.atoms[0].0
    }

    pub fn max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].0
    }

    fn plateaus(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.atoms
            .iter()
            .zip(&self.cum)
            .map(|(&(v, p), &hi)| (v, hi - p, hi))
    }
}

impl TryFrom<Vec<(f64, f64)>> for FiniteDiscrete {
    type Error = Error;
    fn try_from(v: Vec<(f64, f64)>) -> Result<Self> {
        FiniteDiscrete::new(v)
    }
}

impl From<FiniteDiscrete> for Vec<(f64, f64)> {
    fn from(d: FiniteDiscrete) -> Self {
        d.atoms
    }
}

impl Distribution for FiniteDiscrete {
    fn cdf(&self, x: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.0 <= x);
        if i == 0 {
            0.0
        } else {
            self.cum[i - 1]
        }
    }

    fn cdf_left(&self, x: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.0 < x);
        if i == 0 {
            0.0
        } else {
            self.cum[i - 1]
        }
    }

    fn quantile(&self, u: f64) -> f64 {
        let i = self.cum.partition_point(|&c| c < u);
        self.atoms[i.min(self.atoms.len() - 1)].0
    }

    fn mean_status(&self) -> MeanStatus {
        MeanStatus::Finite(self.mean())
    }

    fn quantile_integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok(plateau_integral(self.plateaus(), a, b))
    }

    fn survival_integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok(atomic_survival_integral(self.atoms.iter().copied(), a, b))
    }
}
