//! Dense phase-1 simplex with Bland's rule for `A x = b, x >= 0, b >= 0`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

/// Field the tableau runs over. `eps` is the pivot/sign tolerance (zero
/// for exact arithmetic).
pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn eps() -> Self;

    fn to_f64(&self) -> f64;

    fn is_neg(&self) -> bool {
        *self < -Self::eps()
    }

    fn is_pos(&self) -> bool {
        *self > Self::eps()
    }
}

impl LpScalar for f64 {
    fn eps() -> Self {
        1e-12
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl LpScalar for BigRational {
    fn eps() -> Self {
        BigRational::zero()
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }

    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
}

/// Exact rational value of a finite `f64`.
pub fn exact_rational(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite value")
}

/// Outcome of phase 1.
#[derive(Debug, Clone)]
pub struct PhaseOne<T> {
    /// Primal point with `x >= 0` (feasible when `infeasibility` is 0).
    pub x: Vec<T>,
    /// Optimal `Σ artificials`.
    pub infeasibility: T,
    /// Dual vector `y` with `y^T A <= 0` (up to `eps`) and `y^T b = infeasibility`.
    pub farkas: Vec<T>,
    pub pivots: usize,
}

/// Minimizes the sum of artificial variables for `A x = b`, `x >= 0`.
///
/// `a` is row-major with `rows × cols` entries; every `b_i` must be
/// non-negative.
pub fn phase_one<T: LpScalar>(a: &[T], b: &[T], rows: usize, cols: usize) -> PhaseOne<T> {
    assert_eq!(a.len(), rows * cols);
    assert_eq!(b.len(), rows);
    let width = cols + rows + 1;
    // tableau rows: constraints, then the objective row (reduced costs)
    let mut tab = vec![T::zero(); (rows + 1) * width];
    for i in 0..rows {
        for j in 0..cols {
            tab[i * width + j] = a[i * cols + j].clone();
        }
        tab[i * width + cols + i] = T::one();
        tab[i * width + width - 1] = b[i].clone();
    }
    // reduced cost of column j is -Σ_i a_ij; artificials are basic at cost 1
    let obj = rows * width;
    for j in 0..cols {
        let mut s = T::zero();
        for i in 0..rows {
            s = s - tab[i * width + j].clone();
        }
        tab[obj + j] = s;
    }
    let mut total = T::zero();
    for bi in b {
        total = total - bi.clone();
    }
    tab[obj + width - 1] = total;
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    let mut pivots = 0;
    // Bland: smallest index with negative reduced cost
    while let Some(enter) = (0..cols + rows).find(|&j| tab[obj + j].is_neg()) {
        let mut leave: Option<(usize, T)> = None;
        for i in 0..rows {
            let aij = &tab[i * width + enter];
            if !aij.is_pos() {
                continue;
            }
            let ratio = tab[i * width + width - 1].clone() / aij.clone();
            leave = match leave {
                None => Some((i, ratio)),
                Some((k, best)) => {
                    if ratio < best || (ratio == best && basis[i] < basis[k]) {
                        Some((i, ratio))
                    } else {
                        Some((k, best))
                    }
                }
            };
        }
        // the objective is bounded below by 0, so a leaving row exists
        let Some((r, _)) = leave else { break };
        pivot(&mut tab, width, rows + 1, r, enter);
        basis[r] = enter;
        pivots += 1;
    }

    let mut x = vec![T::zero(); cols];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < cols {
            let v = tab[i * width + width - 1].clone();
            x[bj] = if v < T::zero() { T::zero() } else { v };
        }
    }
    // y_i = c_B B^{-1} e_i; the artificial column i has cost 1, so its
    // reduced cost is 1 - y_i
    let farkas: Vec<T> = (0..rows)
        .map(|i| T::one() - tab[obj + cols + i].clone())
        .collect();
    PhaseOne {
        x,
        infeasibility: -tab[obj + width - 1].clone(),
        farkas,
        pivots,
    }
}

fn pivot<T: LpScalar>(tab: &mut [T], width: usize, nrows: usize, r: usize, c: usize) {
    let p = tab[r * width + c].clone();
    for j in 0..width {
        let v = tab[r * width + j].clone() / p.clone();
        tab[r * width + j] = v;
    }
    for i in 0..nrows {
        if i == r {
            continue;
        }
        let f = tab[i * width + c].clone();
        if f.is_zero() {
            continue;
        }
        for j in 0..width {
            let v = tab[i * width + j].clone() - f.clone() * tab[r * width + j].clone();
            tab[i * width + j] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn feasible_system_reaches_zero() {
        // x0 + x1 = 1, x1 + x2 = 1/2
        let a = [1.0, 1.0, 0.0, 0.0, 1.0, 1.0];
        let out = phase_one(&a, &[1.0, 0.5], 2, 3);
        assert!(out.infeasibility.abs() < 1e-15);
        assert!((out.x[0] + out.x[1] - 1.0).abs() < 1e-15);
        assert!((out.x[1] + out.x[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn infeasible_system_yields_a_farkas_vector() {
        // x0 = 1, x0 = 2
        let a = vec![q(1, 1), q(1, 1)];
        let b = vec![q(1, 1), q(2, 1)];
        let out = phase_one(&a, &b, 2, 1);
        assert_eq!(out.infeasibility, q(1, 1));
        let ya: BigRational = out.farkas[0].clone() + out.farkas[1].clone();
        let yb = out.farkas[0].clone() + q(2, 1) * out.farkas[1].clone();
        assert!(ya <= q(0, 1));
        assert_eq!(yb, out.infeasibility);
    }
}
