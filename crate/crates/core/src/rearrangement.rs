//! Rearrangement algorithm (RA) on discretized marginals.
//!
//! Each column of a [`QuantileMatrix`] holds the `m` mid-quantiles of one
//! marginal. A sweep re-sorts every column antitonically against the sum
//! of the other columns, which flattens row sums. Columns are stored as a
//! sorted value list plus a row-to-value index map, so every transformation
//! is a permutation and the column multisets never change.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::distributions::Distribution;
use crate::error::{domain, Result};
use crate::rng::substream;

/// `q((j - 1/2)/m)` for `j = 1..=m`.
pub fn discretize(mu: &dyn Distribution, m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return domain(format!("discretization needs m >= 2, got {m}"));
    }
    let mf = m as f64;
    (0..m)
        .map(|j| {
            let v = mu.quantile((j as f64 + 0.5) / mf);
            if v.is_finite() {
                Ok(v)
            } else {
                domain(format!(
                    "quantile at level {} is not finite",
                    (j as f64 + 0.5) / mf
                ))
            }
        })
        .collect()
}

/// `m × n` matrix whose column `j` is a permutation of a fixed value list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileMatrix {
    m: usize,
    values: Vec<Vec<f64>>,
    // order[j][i] = index into values[j] of the entry in row i
    order: Vec<Vec<u32>>,
}

impl QuantileMatrix {
    /// Builds the matrix with each column in its given row order.
    pub fn new(columns: Vec<Vec<f64>>) -> Result<Self> {
        let m = columns.first().map_or(0, Vec::len);
        if columns.is_empty() || m == 0 {
            return domain("a quantile matrix needs at least one non-empty column");
        }
        if columns.iter().any(|c| c.len() != m) {
            return domain("all columns must have the same length");
        }
        if m > u32::MAX as usize {
            return domain("too many rows");
        }
        if columns.iter().flatten().any(|v| !v.is_finite()) {
            return domain("matrix entries must be finite");
        }
        let mut values = Vec::with_capacity(columns.len());
        let mut order = Vec::with_capacity(columns.len());
        for col in columns {
            let mut idx: Vec<u32> = (0..m as u32).collect();
            idx.sort_by(|&a, &b| col[a as usize].total_cmp(&col[b as usize]));
            let sorted: Vec<f64> = idx.iter().map(|&i| col[i as usize]).collect();
            // row r held col[r] = sorted[rank of r]
            let mut rank = vec![0u32; m];
            for (pos, &r) in idx.iter().enumerate() {
                rank[r as usize] = pos as u32;
            }
            values.push(sorted);
            order.push(rank);
        }
        Ok(QuantileMatrix { m, values, order })
    }

    /// Builds the matrix with every column independently shuffled by the
    /// substream `("ra-init", j)` of `seed`.
    pub fn shuffled(columns: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        let mut mat = QuantileMatrix::new(columns)?;
        for (j, ord) in mat.order.iter_mut().enumerate() {
            ord.shuffle(&mut substream(seed, "ra-init", j as u64));
        }
        Ok(mat)
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[col][self.order[col][row] as usize]
    }

    /// Column `j` in row order.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.order[j]
            .iter()
            .map(|&k| self.values[j][k as usize])
            .collect()
    }

    /// Column `j` sorted ascending; invariant under rearrangement.
    pub fn sorted_column(&self, j: usize) -> &[f64] {
        &self.values[j]
    }

    /// Index of each row's entry within the sorted column `j`.
    pub fn rank_column(&self, j: usize) -> &[u32] {
        &self.order[j]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols()).map(|j| self.get(i, j)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.m];
        for j in 0..self.cols() {
            for (s, &k) in sums.iter_mut().zip(&self.order[j]) {
                *s += self.values[j][k as usize];
            }
        }
        sums
    }

    /// `max - min` of the row sums.
    pub fn spread(&self) -> f64 {
        spread_of(&self.row_sums())
    }

    /// `2 Σ_j range_j / m`.
    pub fn default_spread_tol(&self) -> f64 {
        let total: f64 = self.values.iter().map(|v| v[v.len() - 1] - v[0]).sum();
        2.0 * total / self.m as f64
    }

    // One antitonic pass over every column; returns whether anything moved.
    fn sweep(&mut self, sums: &mut [f64], rows: &mut [u32]) -> bool {
        let mut moved = false;
        for j in 0..self.cols() {
            let vals = &self.values[j];
            let ord = &mut self.order[j];
            for (i, s) in sums.iter_mut().enumerate() {
                *s -= vals[ord[i] as usize];
            }
            for (i, r) in rows.iter_mut().enumerate() {
                *r = i as u32;
            }
            // stable: equal partial sums keep row order
            rows.sort_by(|&a, &b| sums[a as usize].total_cmp(&sums[b as usize]));
            let top = self.m as u32 - 1;
            for (pos, &r) in rows.iter().enumerate() {
                let k = top - pos as u32;
                if ord[r as usize] != k {
                    if vals[ord[r as usize] as usize] != vals[k as usize] {
                        moved = true;
                    }
                    ord[r as usize] = k;
                }
            }
            for (i, s) in sums.iter_mut().enumerate() {
                *s += vals[ord[i] as usize];
            }
        }
        moved
    }
}

fn spread_of(sums: &[f64]) -> f64 {
    let (lo, hi) = sums
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
            (lo.min(s), hi.max(s))
        });
    hi - lo
}

/// Stopping rule for [`ra_flatten`]. `spread_tol = None` uses
/// [`QuantileMatrix::default_spread_tol`].
#[derive(Debug, Clone, Copy)]
pub struct RaOptions {
    pub max_sweeps: usize,
    pub spread_tol: Option<f64>,
}

impl Default for RaOptions {
    fn default() -> Self {
        RaOptions {
            max_sweeps: 1000,
            spread_tol: None,
        }
    }
}

/// Result of [`ra_flatten`]. `spread_history[k]` is the smallest spread seen
/// after `k` sweeps (entry 0 is the input); `matrix` is the arrangement
/// attaining the last entry.
#[derive(Debug, Clone)]
pub struct RaOutcome {
    pub matrix: QuantileMatrix,
    pub spread: f64,
    pub sweeps: usize,
    pub converged: bool,
    pub spread_history: Vec<f64>,
}

/// Runs antitonic sweeps until the spread is at most the tolerance, a sweep
/// changes nothing, or `max_sweeps` is reached.
pub fn ra_flatten(matrix: QuantileMatrix, opts: RaOptions) -> RaOutcome {
    let tol = opts
        .spread_tol
        .unwrap_or_else(|| matrix.default_spread_tol());
    let mut current = matrix;
    let mut sums = current.row_sums();
    let mut rows = vec![0u32; current.m];
    let mut best_spread = spread_of(&sums);
    let mut best = current.clone();
    let mut history = vec![best_spread];
    let mut sweeps = 0;
    if current.cols() < 2 {
        return RaOutcome {
            matrix: best,
            spread: best_spread,
            sweeps,
            converged: best_spread <= tol,
            spread_history: history,
        };
    }
    while best_spread > tol && sweeps < opts.max_sweeps {
        let moved = current.sweep(&mut sums, &mut rows);
        sweeps += 1;
        // recompute to keep rounding from accumulating in the running sums
        sums = current.row_sums();
        let s = spread_of(&sums);
        if s < best_spread {
            best_spread = s;
            best = current.clone();
        }
        history.push(best_spread);
        if !moved {
            break;
        }
    }
    RaOutcome {
        matrix: best,
        spread: best_spread,
        sweeps,
        converged: best_spread <= tol,
        spread_history: history,
    }
}

/// A uniformly chosen row with its coordinates uniformly permuted.
pub fn row_sampler<R: RngCore + ?Sized>(matrix: &QuantileMatrix, rng: &mut R) -> Vec<f64> {
    let i = rng.random_range(0..matrix.rows());
    let mut row = matrix.row(i);
    row.shuffle(rng);
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{AtomPlusUniform, FiniteDiscrete, Uniform};
    use proptest::prelude::*;

    fn uniform_columns(n: usize, m: usize) -> Vec<Vec<f64>> {
        let u = Uniform::new(0.0, 1.0).unwrap();
        vec![discretize(&u, m).unwrap(); n]
    }

    #[test]
    fn discretize_examples() {
        let u = Uniform::new(0.0, 1.0).unwrap();
        assert_eq!(discretize(&u, 4).unwrap(), vec![0.125, 0.375, 0.625, 0.875]);
        assert_eq!(
            discretize(&FiniteDiscrete::point(2.5), 5).unwrap(),
            vec![2.5; 5]
        );
        let d = AtomPlusUniform::new(0.0, 1.0, 0.5).unwrap();
        // (u - 1/2)/(1/2) above the atom level
        assert_eq!(discretize(&d, 4).unwrap(), vec![0.0, 0.0, 0.25, 0.75]);
        assert!(discretize(&u, 1).is_err());
    }

    #[test]
    fn three_uniform_columns_flatten() {
        let mat = QuantileMatrix::shuffled(uniform_columns(3, 256), 11).unwrap();
        let out = ra_flatten(mat, RaOptions::default());
        assert!(out.spread <= 0.05, "{}", out.spread);
    }

    #[test]
    fn two_columns_become_antitonic() {
        let a = vec![0.3, -1.0, 2.0, 0.7, 5.0];
        let b = vec![1.0, 4.0, -2.0, 0.5, 3.0];
        let mat = QuantileMatrix::shuffled(vec![a, b], 3).unwrap();
        let out = ra_flatten(
            mat,
            RaOptions {
                max_sweeps: 50,
                spread_tol: Some(0.0),
            },
        );
        let c0 = out.matrix.column(0);
        let c1 = out.matrix.column(1);
        for i in 0..5 {
            for k in 0..5 {
                if c0[i] < c0[k] {
                    assert!(c1[i] >= c1[k]);
                }
            }
        }
    }

    #[test]
    fn single_column_is_unchanged() {
        let mat = QuantileMatrix::new(vec![vec![3.0, 1.0, 2.0]]).unwrap();
        let out = ra_flatten(mat.clone(), RaOptions::default());
        assert_eq!(out.matrix, mat);
        assert_eq!(out.matrix.column(0), vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn spread_shrinks_with_m() {
        let mut prev = f64::INFINITY;
        for m in [64, 256, 1024] {
            let mat = QuantileMatrix::shuffled(uniform_columns(3, m), 5).unwrap();
            let s = ra_flatten(mat, RaOptions::default()).spread;
            assert!(s < prev, "m = {m}: {s} !< {prev}");
            prev = s;
        }
    }

    #[test]
    fn two_point_family_flattens_exactly() {
        // (δ_0 + 2δ_1)/3 is 3-completely mixable with sum 2
        let d = FiniteDiscrete::two_point(3, 1, 0.0, 1.0).unwrap();
        let col = discretize(&d, 30).unwrap();
        let mat = QuantileMatrix::shuffled(vec![col.clone(), col.clone(), col], 2).unwrap();
        let out = ra_flatten(
            mat,
            RaOptions {
                max_sweeps: 100,
                spread_tol: Some(0.0),
            },
        );
        assert_eq!(out.spread, 0.0);
        assert!(out.matrix.row_sums().iter().all(|&s| s == 2.0));
    }

    #[test]
    fn row_sampler_uses_matrix_rows() {
        let mat = QuantileMatrix::shuffled(uniform_columns(3, 16), 1).unwrap();
        let out = ra_flatten(mat, RaOptions::default()).matrix;
        let sums = out.row_sums();
        let mut rng = substream(0, "rows", 0);
        for _ in 0..200 {
            let r = row_sampler(&out, &mut rng);
            let s: f64 = r.iter().sum();
            assert!(sums.iter().any(|&t| (t - s).abs() < 1e-12));
        }
    }

    proptest! {
        #[test]
        fn columns_are_preserved_and_spread_monotone(
            seed in 0u64..1000,
            n in 2usize..5,
            m in 2usize..40,
            raw in proptest::collection::vec(-10.0f64..10.0, 200),
        ) {
            let columns: Vec<Vec<f64>> = (0..n).map(|j| raw[j * m % 160..][..m].to_vec()).collect();
            let mat = QuantileMatrix::shuffled(columns.clone(), seed).unwrap();
            let out = ra_flatten(mat, RaOptions { max_sweeps: 30, spread_tol: Some(0.0) });
            for (j, col) in columns.iter().enumerate() {
                let mut a = col.clone();
                a.sort_by(f64::total_cmp);
                let mut b = out.matrix.column(j);
                b.sort_by(f64::total_cmp);
                prop_assert_eq!(a, b);
            }
            for w in out.spread_history.windows(2) {
                prop_assert!(w[1] <= w[0]);
            }
            prop_assert_eq!(out.spread, out.matrix.spread());
        }
    }
}
