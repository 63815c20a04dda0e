use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::coupling::Coupling;
use super::simplex::{exact_rational, phase_one, LpScalar};
use crate::center_bounds::{jm_center_bounds, JmBoundsInput};
use crate::distributions::{Distribution, FiniteDiscrete};
use crate::error::{Error, Result};

/// Largest number of sum-slice tuples handed to the simplex.
pub const MAX_VARIABLES: usize = 1_000_000;
/// Largest number of tuples accepted in exact mode.
pub const MAX_EXACT_VARIABLES: usize = 10_000;

// window offset per marginal used for candidate pruning
const PRUNE_BETA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityOptions {
    /// Tolerance on tuple sums and on marginal residuals.
    pub tol: f64,
    /// Run the simplex over exact rationals.
    pub exact: bool,
}

impl Default for FeasibilityOptions {
    fn default() -> Self {
        FeasibilityOptions {
            tol: 1e-9,
            exact: false,
        }
    }
}

/// Dual vector proving that no coupling exists.
///
/// One entry per (marginal, atom) constraint; `y·b = value > 0` while
/// `y·A_j <= max_column` for every sum-slice tuple `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarkasCertificate {
    pub rows: Vec<(usize, f64)>,
    pub y: Vec<f64>,
    pub value: f64,
    pub max_column: f64,
}

impl FarkasCertificate {
    /// `y·b > 0` with every column product non-positive up to `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.value > tol && self.max_column <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Feasible {
        coupling: Coupling,
        residual: f64,
    },
    Infeasible {
        certificate: FarkasCertificate,
    },
    /// Marginal residual in `(tol, 10 tol]`.
    Borderline {
        coupling: Coupling,
        residual: f64,
    },
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible { .. })
    }

    pub fn coupling(&self) -> Option<&Coupling> {
        match self {
            Verdict::Feasible { coupling, .. } | Verdict::Borderline { coupling, .. } => {
                Some(coupling)
            }
            Verdict::Infeasible { .. } => None,
        }
    }
}

/// Tuples of atom indices whose values sum to `c` within `tol`.
fn slice_tuples(
    marginals: &[FiniteDiscrete],
    c: f64,
    tol: f64,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = marginals.len();
    // suffix bounds of the remaining coordinates
    let mut lo = vec![0.0; n + 1];
    let mut hi = vec![0.0; n + 1];
    for i in (0..n).rev() {
        lo[i] = lo[i + 1] + marginals[i].min();
        hi[i] = hi[i + 1] + marginals[i].max();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    fn walk(
        i: usize,
        partial: f64,
        ctx: (&[FiniteDiscrete], &[f64], &[f64], f64, f64, usize),
        idx: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let (m, lo, hi, c, tol, limit) = ctx;
        if i == m.len() {
            if (partial - c).abs() <= tol {
                if out.len() == limit {
                    return Err(Error::TooLarge {
                        what: "sum-slice variables",
                        size: limit + 1,
                        limit,
                    });
                }
                out.push(idx.clone());
            }
            return Ok(());
        }
        for (k, &(v, _)) in m[i].atoms().iter().enumerate() {
            let s = partial + v;
            if s + lo[i + 1] > c + tol || s + hi[i + 1] < c - tol {
                continue;
            }
            idx[i] = k;
            walk(i + 1, s, ctx, idx, out)?;
        }
        Ok(())
    }
    walk(
        0,
        0.0,
        (marginals, &lo, &hi, c, tol, limit),
        &mut idx,
        &mut out,
    )?;
    Ok(out)
}

/// Decides whether the marginals admit a joint mix with center `c`.
///
/// Variables are the tuples of atoms summing to `c` within `tol`; the
/// constraints fix every marginal atom. A feasible answer carries the
/// coupling, an infeasible one a Farkas vector.
pub fn lp_feasible_center(
    marginals: &[FiniteDiscrete],
    c: f64,
    opts: FeasibilityOptions,
) -> Result<Verdict> {
    if marginals.is_empty() {
        return Err(Error::Domain("need at least one marginal".into()));
    }
    if !(opts.tol >= 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!(
            "bad center {c} or tolerance {}",
            opts.tol
        )));
    }
    let limit = if opts.exact {
        MAX_EXACT_VARIABLES
    } else {
        MAX_VARIABLES
    };
    let tuples = slice_tuples(marginals, c, opts.tol, limit)?;
    let rows: Vec<(usize, f64)> = marginals
        .iter()
        .enumerate()
        .flat_map(|(i, m)| m.atoms().iter().map(move |&(v, _)| (i, v)))
        .collect();
    let offsets: Vec<usize> = marginals
        .iter()
        .scan(0, |acc, m| {
            let o = *acc;
            *acc += m.len();
            Some(o)
        })
        .collect();
    let (nr, nc) = (rows.len(), tuples.len());
    let column_rows = |j: usize| tuples[j].iter().enumerate().map(|(i, &k)| offsets[i] + k);

    let (x, infeasibility, y): (Vec<f64>, f64, Vec<f64>) = if opts.exact {
        let mut a = vec![BigRational::zero(); nr * nc];
        for j in 0..nc {
            for r in column_rows(j) {
                a[r * nc + j] = BigRational::from_integer(1.into());
            }
        }
        // each marginal is rescaled to total exactly 1
        let mut b = Vec::with_capacity(nr);
        for m in marginals {
            let ps: Vec<BigRational> = m.atoms().iter().map(|a| exact_rational(a.1)).collect();
            let total = ps.iter().fold(BigRational::zero(), |s, p| s + p);
            b.extend(ps.into_iter().map(|p| p / total.clone()));
        }
        let out = phase_one(&a, &b, nr, nc);
        let x = out.x.iter().map(LpScalar::to_f64).collect();
        let inf = if out.infeasibility.is_zero() {
            0.0
        } else {
            // keep a positive value even if it rounds below f64 range
            LpScalar::to_f64(&out.infeasibility).max(f64::MIN_POSITIVE)
        };
        let y = out.farkas.iter().map(LpScalar::to_f64).collect();
        (x, inf, y)
    } else {
        let mut a = vec![0.0; nr * nc];
        for j in 0..nc {
            for r in column_rows(j) {
                a[r * nc + j] = 1.0;
            }
        }
        let b: Vec<f64> = marginals
            .iter()
            .flat_map(|m| m.atoms().iter().map(|a| a.1))
            .collect();
        let out = phase_one(&a, &b, nr, nc);
        (out.x, out.infeasibility, out.farkas)
    };

    let threshold = if opts.exact { 0.0 } else { opts.tol };
    if infeasibility <= 10.0 * threshold {
        let mut support = Vec::new();
        let mut weights = Vec::new();
        for (j, &w) in x.iter().enumerate() {
            if w > 0.0 {
                support.push(
                    tuples[j]
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| marginals[i].atoms()[k].0)
                        .collect(),
                );
                weights.push(w);
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let coupling = Coupling::new(marginals.len(), support, weights, 0.0)?;
        let residual = coupling.max_marginal_residual(marginals);
        let bound = threshold.max(1e-12);
        if residual <= bound && infeasibility <= threshold {
            return Ok(Verdict::Feasible { coupling, residual });
        }
        if residual <= 10.0 * bound {
            return Ok(Verdict::Borderline { coupling, residual });
        }
    }
    let b: Vec<f64> = marginals
        .iter()
        .flat_map(|m| m.atoms().iter().map(|a| a.1))
        .collect();
    let value = y.iter().zip(&b).map(|(y, b)| y * b).sum();
    let max_column = (0..nc)
        .map(|j| column_rows(j).map(|r| y[r]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Verdict::Infeasible {
        certificate: FarkasCertificate {
            rows,
            y,
            value,
            max_column: if nc == 0 { 0.0 } else { max_column },
        },
    })
}

/// Certified centers of finite marginals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterSet {
    pub centers: Vec<f64>,
    /// Candidates handed to the simplex after pruning.
    pub candidates_examined: usize,
    /// Distinct values of `A_1 + … + A_n`.
    pub candidates_total: usize,
    /// One coupling per entry of `centers`.
    pub certificates: Vec<Coupling>,
    /// Candidates with a borderline verdict (not counted as centers).
    pub borderline: Vec<f64>,
    /// Interval from the center bounds used for pruning.
    pub bounds: (f64, f64),
}

/// All centers of the marginals: every distinct sum of atoms inside the
/// center bounds is decided by [`lp_feasible_center`].
pub fn enumerate_centers(
    marginals: &[FiniteDiscrete],
    opts: FeasibilityOptions,
) -> Result<CenterSet> {
    let n = marginals.len();
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 marginals, got {n}")));
    }
    let mut sums = vec![0.0];
    for m in marginals {
        let mut next: Vec<f64> = sums
            .iter()
            .flat_map(|s| m.values().map(move |v| s + v))
            .collect();
        next.sort_by(f64::total_cmp);
        next.dedup_by(|a, b| (*a - *b).abs() <= opts.tol);
        if next.len() > MAX_VARIABLES {
            return Err(Error::TooLarge {
                what: "candidate centers",
                size: next.len(),
                limit: MAX_VARIABLES,
            });
        }
        sums = next;
    }
    let dists: Vec<&dyn Distribution> = marginals.iter().map(|m| m as &dyn Distribution).collect();
    let bounds = jm_center_bounds(&JmBoundsInput {
        marginals: dists,
        betas: vec![PRUNE_BETA / n as f64; n],
    })?;
    let slack = opts.tol + 1e-12 * (bounds.0.abs() + bounds.1.abs());
    let candidates: Vec<f64> = sums
        .iter()
        .copied()
        .filter(|&s| s >= bounds.0 - slack && s <= bounds.1 + slack)
        .collect();
    let verdicts: Vec<(f64, Verdict)> = candidates
        .par_iter()
        .map(|&s| lp_feasible_center(marginals, s, opts).map(|v| (s, v)))
        .collect::<Result<_>>()?;
    let mut out = CenterSet {
        centers: Vec::new(),
        candidates_examined: candidates.len(),
        candidates_total: sums.len(),
        certificates: Vec::new(),
        borderline: Vec::new(),
        bounds,
    };
    for (s, v) in verdicts {
        match v {
            Verdict::Feasible { coupling, .. } => {
                out.centers.push(s);
                out.certificates.push(coupling);
            }
            Verdict::Borderline { .. } => out.borderline.push(s),
            Verdict::Infeasible { .. } => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact() -> FeasibilityOptions {
        FeasibilityOptions {
            exact: true,
            ..Default::default()
        }
    }

    #[test]
    fn two_point_family_is_certified_at_its_sum() {
        let m = FiniteDiscrete::two_point(3, 1, 0.0, 1.0).unwrap();
        let ms = vec![m.clone(), m.clone(), m];
        for opts in [FeasibilityOptions::default(), exact()] {
            let v = lp_feasible_center(&ms, 2.0, opts).unwrap();
            let coupling = v.coupling().unwrap();
            assert!(v.is_feasible());
            coupling.certify(&ms, 2.0, 1e-9, 1e-10).unwrap();
            for c in [0.0, 1.0, 3.0] {
                assert!(matches!(
                    lp_feasible_center(&ms, c, opts).unwrap(),
                    Verdict::Infeasible { .. }
                ));
            }
        }
    }

    #[test]
    fn bernoulli_pair_has_no_center() {
        let b = FiniteDiscrete::new(vec![(0.0, 0.7), (1.0, 0.3)]).unwrap();
        let ms = vec![b.clone(), b];
        for opts in [FeasibilityOptions::default(), exact()] {
            for c in [0.0, 1.0, 2.0] {
                match lp_feasible_center(&ms, c, opts).unwrap() {
                    Verdict::Infeasible { certificate } => {
                        assert!(certificate.is_valid(1e-9), "{certificate:?}")
                    }
                    v => panic!("C = {c}: {v:?}"),
                }
            }
        }
        assert!(enumerate_centers(&ms, FeasibilityOptions::default())
            .unwrap()
            .centers
            .is_empty());
    }

    #[test]
    fn degenerate_marginals() {
        let d = FiniteDiscrete::point(1.0);
        let ms = vec![d.clone(), d.clone(), d];
        let set = enumerate_centers(&ms, FeasibilityOptions::default()).unwrap();
        assert_eq!(set.centers, vec![3.0]);
        assert!(!lp_feasible_center(&ms, 2.0, exact()).unwrap().is_feasible());
    }

    #[test]
    fn enumerate_known_sets() {
        let m = FiniteDiscrete::two_point(3, 1, 0.0, 1.0).unwrap();
        let set =
            enumerate_centers(&[m.clone(), m.clone(), m], FeasibilityOptions::default()).unwrap();
        assert_eq!(set.centers, vec![2.0]);
        assert_eq!(set.candidates_total, 4);
        let u = FiniteDiscrete::new(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let set = enumerate_centers(&[u.clone(), u], exact()).unwrap();
        assert_eq!(set.centers, vec![0.0]);
        for &c in &set.centers {
            assert!(c >= set.bounds.0 - 1e-9 && c <= set.bounds.1 + 1e-9);
        }
    }

    #[test]
    fn variable_guard() {
        let atoms: Vec<(f64, f64)> = (0..200).map(|k| (k as f64, 1.0 / 200.0)).collect();
        let m = FiniteDiscrete::new(atoms).unwrap();
        let ms = vec![m.clone(), m.clone(), m];
        let err = lp_feasible_center(&ms, 300.0, exact()).unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }
}
