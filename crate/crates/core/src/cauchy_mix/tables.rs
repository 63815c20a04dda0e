use std::sync::OnceLock;

use rand::RngCore;

use crate::rearrangement::{ra_flatten, QuantileMatrix, RaOptions};
use crate::rng::substream;

/// Number of atom-weight bins for `0 < α_max`.
pub const ALPHA_BINS: usize = 512;

const RESTARTS: u64 = 3;
const MAX_SWEEPS: usize = 100;
// stop restarting once the worst row is this fraction of the n/m budget
const GOOD_ENOUGH: f64 = 0.6;

/// `((l + 1/2)/m - α)_+ / (1 - α)`: mid-quantile `l` of the law with an
/// atom of weight `α` at 0 and uniform mass on `[0, 1]`.
pub fn level_value(level: usize, m: usize, alpha: f64) -> f64 {
    (((level as f64 + 0.5) / m as f64) - alpha).max(0.0) / (1.0 - alpha)
}

/// An `m × n` coupling of the `m`-point discretization of
/// `α δ_0 + (1-α) U[0,1]`, stored as quantile levels so it can be evaluated
/// at a nearby `α`.
#[derive(Debug, Clone)]
pub struct CouplingTable {
    pub alpha: f64,
    levels: Vec<u16>,
    n: usize,
    m: usize,
    /// `max_i |Σ_j z_ij - n(1-α)/2|` at the table's own `α`.
    pub max_deviation: f64,
    pub sweeps: usize,
}

impl CouplingTable {
    /// Rearranges `n` columns cut from the sorted pool of all `n m` levels;
    /// a few seeded restarts keep the best arrangement.
    pub fn build(n: usize, m: usize, alpha: f64, seed: u64) -> CouplingTable {
        let target = n as f64 * (1.0 - alpha) / 2.0;
        let pool: Vec<usize> = (0..m).flat_map(|l| std::iter::repeat_n(l, n)).collect();
        let columns: Vec<&[usize]> = pool.chunks(m).collect();
        let mut best: Option<CouplingTable> = None;
        for restart in 0..RESTARTS {
            let values: Vec<Vec<f64>> = columns
                .iter()
                .map(|col| col.iter().map(|&l| level_value(l, m, alpha)).collect())
                .collect();
            let start_seed = substream(seed, "ra-table", restart).next_u64();
            let matrix = QuantileMatrix::shuffled(values, start_seed).expect("finite table values");
            let out = ra_flatten(
                matrix,
                RaOptions {
                    max_sweeps: MAX_SWEEPS,
                    spread_tol: Some(0.25 / m as f64),
                },
            );
            // columns are sorted by level, and the stable value sort keeps
            // that order, so sorted position k holds level col[k]
            let mut levels = vec![0u16; m * n];
            for (j, col) in columns.iter().enumerate() {
                for (i, &k) in out.matrix.rank_column(j).iter().enumerate() {
                    levels[i * n + j] = col[k as usize] as u16;
                }
            }
            let max_deviation = out
                .matrix
                .row_sums()
                .iter()
                .map(|s| (s - target).abs())
                .fold(0.0, f64::max);
            if best
                .as_ref()
                .is_none_or(|b| max_deviation < b.max_deviation)
            {
                best = Some(CouplingTable {
                    alpha,
                    levels,
                    n,
                    m,
                    max_deviation,
                    sweeps: out.sweeps,
                });
            }
            if max_deviation <= GOOD_ENOUGH * n as f64 / m as f64 {
                break;
            }
        }
        best.expect("at least one restart")
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    /// Levels of row `i`.
    pub fn row(&self, i: usize) -> &[u16] {
        &self.levels[i * self.n..(i + 1) * self.n]
    }

    /// Row `i` evaluated at atom weight `alpha`.
    pub fn row_values(&self, i: usize, alpha: f64, out: &mut [f64]) {
        for (o, &l) in out.iter_mut().zip(self.row(i)) {
            *o = level_value(l as usize, self.m, alpha);
        }
    }

    /// Row `i` at `alpha`, with the positive entries moved affinely so the row
    /// sums to `n(1-α)/2`. Entries stay in `[0, 1]` and keep their order;
    /// zeros (the atom) are untouched. Returns `false`, leaving the plain
    /// row, when the positive entries lack the room.
    pub fn balanced_row_values(&self, i: usize, alpha: f64, out: &mut [f64]) -> bool {
        self.row_values(i, alpha, out);
        let target = self.n as f64 * (1.0 - alpha) / 2.0;
        let residual = target - out.iter().sum::<f64>();
        if residual == 0.0 {
            return true;
        }
        let (mass, room) = out
            .iter()
            .filter(|&&z| z > 0.0)
            .fold((0.0, 0.0), |(s, r), &z| (s + z, r + (1.0 - z)));
        if residual < 0.0 {
            if mass < -residual {
                return false;
            }
            let scale = 1.0 + residual / mass;
            out.iter_mut().for_each(|z| *z *= scale);
        } else {
            if room < residual {
                return false;
            }
            let shrink = 1.0 - residual / room;
            out.iter_mut()
                .filter(|z| **z > 0.0)
                .for_each(|z| *z = 1.0 - (1.0 - *z) * shrink);
        }
        true
    }
}

/// Lazily built coupling tables on an even grid of `α` in `[0, α_max]`.
#[derive(Debug)]
pub struct CouplingTables {
    n: usize,
    m: usize,
    alpha_max: f64,
    seed: u64,
    cells: Vec<OnceLock<CouplingTable>>,
}

impl CouplingTables {
    pub fn new(n: usize, m: usize, alpha_max: f64, seed: u64) -> Self {
        let bins = if alpha_max > 0.0 { ALPHA_BINS } else { 1 };
        CouplingTables {
            n,
            m,
            alpha_max,
            seed,
            cells: (0..bins).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn bins(&self) -> usize {
        self.cells.len()
    }

    pub fn bin_alpha(&self, k: usize) -> f64 {
        if self.cells.len() == 1 {
            return 0.0;
        }
        if k + 1 == self.cells.len() {
            return self.alpha_max;
        }
        self.alpha_max * k as f64 / (self.cells.len() - 1) as f64
    }

    /// Table for the bin nearest to `alpha`.
    pub fn table(&self, alpha: f64) -> &CouplingTable {
        let k = if self.cells.len() == 1 {
            0
        } else {
            let x = (alpha / self.alpha_max).clamp(0.0, 1.0) * (self.cells.len() - 1) as f64;
            x.round() as usize
        };
        self.cells[k].get_or_init(|| {
            let seed = substream(self.seed, "ra-bin", k as u64).next_u64();
            CouplingTable::build(self.n, self.m, self.bin_alpha(k), seed)
        })
    }

    /// Number of tables built so far.
    pub fn built(&self) -> usize {
        self.cells.iter().filter(|c| c.get().is_some()).count()
    }

    /// Tables built so far, in bin order.
    pub fn built_tables(&self) -> impl Iterator<Item = &CouplingTable> {
        self.cells.iter().filter_map(|c| c.get())
    }

    /// Largest per-table deviation among the built tables.
    pub fn max_deviation(&self) -> f64 {
        self.cells
            .iter()
            .filter_map(|c| c.get())
            .map(|t| t.max_deviation)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_deviation(t: &CouplingTable, i: usize, alpha: f64, n: usize) -> f64 {
        let mut z = vec![0.0; n];
        t.row_values(i, alpha, &mut z);
        (z.iter().sum::<f64>() - n as f64 * (1.0 - alpha) / 2.0).abs()
    }

    #[test]
    fn columns_keep_the_discretized_marginal() {
        let (n, m) = (3, 64);
        let t = CouplingTable::build(n, m, 0.2, 1);
        let mut counts = vec![0; m];
        for i in 0..m {
            for &l in t.row(i) {
                counts[l as usize] += 1;
            }
        }
        assert!(counts.iter().all(|&c| c == n));
    }

    #[test]
    fn rows_stay_within_budget_across_bins() {
        for &n in &[3usize, 4, 6] {
            let m = 128;
            let alpha_max = 1.0 - 2.0 / n as f64;
            let tables = CouplingTables::new(n, m, alpha_max, 9);
            for step in 0..=20 {
                let alpha = alpha_max * step as f64 / 20.0;
                let t = tables.table(alpha);
                let worst = (0..m)
                    .map(|i| row_deviation(t, i, alpha, n))
                    .fold(0.0, f64::max);
                assert!(worst <= n as f64 / m as f64, "n={n} alpha={alpha}: {worst}");
            }
        }
    }

    #[test]
    fn balanced_rows_hit_the_target_and_stay_close() {
        let (n, m) = (3, 128);
        let tables = CouplingTables::new(n, m, 1.0 / 3.0, 4);
        for step in 0..=10 {
            let alpha = step as f64 / 30.0;
            let t = tables.table(alpha);
            let mut plain = vec![0.0; n];
            let mut z = vec![0.0; n];
            for i in 0..m {
                t.row_values(i, alpha, &mut plain);
                assert!(t.balanced_row_values(i, alpha, &mut z));
                let target = n as f64 * (1.0 - alpha) / 2.0;
                assert!((z.iter().sum::<f64>() - target).abs() < 1e-14);
                for (a, b) in plain.iter().zip(&z) {
                    assert!((0.0..=1.0).contains(b));
                    assert_eq!(*a == 0.0, *b == 0.0);
                    assert!((a - b).abs() <= n as f64 / m as f64);
                }
            }
        }
    }

    #[test]
    fn boundary_bin_is_exact_alpha_max() {
        let tables = CouplingTables::new(3, 32, 1.0 / 3.0, 0);
        assert_eq!(tables.bin_alpha(tables.bins() - 1), 1.0 / 3.0);
        assert_eq!(tables.bin_alpha(0), 0.0);
        assert_eq!(CouplingTables::new(3, 32, 0.0, 0).bins(), 1);
    }

    #[test]
    fn tables_are_deterministic() {
        let a = CouplingTable::build(4, 64, 0.3, 5);
        let b = CouplingTable::build(4, 64, 0.3, 5);
        assert_eq!(a.levels, b.levels);
    }
}
