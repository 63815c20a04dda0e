use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::coupling::Coupling;
use super::simplex::exact_rational;
use crate::error::{Error, Result};

/// Two joint mixes of the same marginals `(ν, ν, γ)` with sums 0 and 1,
/// truncated to `Z <= K`.
///
/// With `Z` geometric (`P(Z = k) = 2^-(k+1)`) and `B` a fair bit:
/// `X = (2^Z, 2^Z, -2^(Z+1))` and
/// `Y = (B 2^(Z+1) + 1 - B, (1 - B) 2^(Z+1) + B, -2^(Z+1))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ex01Couplings {
    pub k: u32,
    pub mix_x: Coupling,
    pub mix_y: Coupling,
}

fn pow2(k: i32) -> f64 {
    2f64.powi(k)
}

fn rpow2(k: i32) -> BigRational {
    let two = BigInt::from(2);
    if k >= 0 {
        BigRational::from_integer(two.pow(k as u32))
    } else {
        BigRational::new(BigInt::one(), two.pow((-k) as u32))
    }
}

/// Exact couplings for `Z ∈ {0, …, K}`; both carry residual mass `2^-(K+1)`.
pub fn ex01_couplings(k: u32) -> Result<Ex01Couplings> {
    if k == 0 || k > 1000 {
        return Err(Error::Domain(format!(
            "truncation level must lie in 1..=1000, got {k}"
        )));
    }
    let residual = pow2(-(k as i32 + 1));
    let mut xs = Vec::new();
    let mut xw = Vec::new();
    let mut ys = Vec::new();
    let mut yw = Vec::new();
    for z in 0..=k as i32 {
        let p = pow2(-(z + 1));
        let top = pow2(z + 1);
        xs.push(vec![pow2(z), pow2(z), -top]);
        xw.push(p);
        for b in [0.0, 1.0] {
            ys.push(vec![b * top + (1.0 - b), (1.0 - b) * top + b, -top]);
            yw.push(p / 2.0);
        }
    }
    Ok(Ex01Couplings {
        k,
        mix_x: Coupling::new(3, xs, xw, residual)?,
        mix_y: Coupling::new(3, ys, yw, residual)?,
    })
}

impl Ex01Couplings {
    /// Exact mass of `coordinate == value` in the untruncated law, summing
    /// the listed rows and the closed-form tail `Z > K`.
    ///
    /// In the tail every coordinate has modulus at least `2^(K+1)` except
    /// the entries equal to 1 in `Y` (first coordinate when `B = 0`, second
    /// when `B = 1`), each of mass `2^-(K+2)`.
    pub fn exact_prob(&self, which_y: bool, coordinate: usize, value: f64) -> BigRational {
        let c = if which_y { &self.mix_y } else { &self.mix_x };
        let mut p = BigRational::zero();
        for (row, &w) in c.support.iter().zip(&c.weights) {
            if row[coordinate] == value {
                p += exact_rational(w);
            }
        }
        if which_y && coordinate < 2 && value == 1.0 {
            p += rpow2(-(self.k as i32 + 2));
        }
        if value.abs() > pow2(self.k as i32) {
            // atoms beyond the truncation: 2^Z for Z > K and -2^(Z+1) for Z > K
            let tail = tail_atom_prob(which_y, coordinate, value, self.k);
            p += tail;
        }
        p
    }
}

// mass of an atom of modulus > 2^K contributed by rows with Z > K
fn tail_atom_prob(which_y: bool, coordinate: usize, value: f64, k: u32) -> BigRational {
    let z_of = |v: f64| -> Option<i32> {
        let e = v.log2().round() as i32;
        (pow2(e) == v).then_some(e)
    };
    let z_limit = k as i32;
    match (which_y, coordinate) {
        (false, 0 | 1) => match z_of(value) {
            Some(z) if z > z_limit => rpow2(-(z + 1)),
            _ => BigRational::zero(),
        },
        (_, 2) => match z_of(-value).map(|e| e - 1) {
            Some(z) if z > z_limit => rpow2(-(z + 1)),
            _ => BigRational::zero(),
        },
        (true, 0 | 1) => match z_of(value).map(|e| e - 1) {
            Some(z) if z > z_limit => rpow2(-(z + 2)),
            _ => BigRational::zero(),
        },
        _ => BigRational::zero(),
    }
}

/// The check excluding center sum 2 for the symmetrized triple.
///
/// All atoms are integers and the center bounds give `0 <= C <= 2`. No two
/// atoms of `μ` sum to 1, so a sum of 2 forces `X_1 ≠ 1` and
/// `P(sum = 2) <= P(X_1 ≠ 1) = 1 - μ({1}) = 2/3 < 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterTwoExclusion {
    /// No pair of atoms up to level `k` sums to 1. For higher levels,
    /// `2^i - 2^(j+1) = 1` would need an odd difference, so `i = 0`.
    pub no_pair_sums_to_one: bool,
    /// `P(X_1 ≠ 1)` under `μ`, exactly.
    pub prob_not_one: String,
    pub excluded: bool,
}

/// Runs the exclusion argument with exact pmfs up to level `k`.
pub fn ex01_center_two_excluded(k: u32) -> Result<CenterTwoExclusion> {
    if k == 0 || k > 1000 {
        return Err(Error::Domain(format!(
            "truncation level must lie in 1..=1000, got {k}"
        )));
    }
    // atoms of μ: 2^j (j >= 0) and -2^(j+1) (j >= 0)
    let mut atoms: Vec<BigInt> = Vec::new();
    for j in 0..=k {
        atoms.push(BigInt::from(2).pow(j));
        atoms.push(-BigInt::from(2).pow(j + 1));
    }
    let one = BigInt::one();
    let listed = atoms.iter().all(|a| atoms.iter().all(|b| a + b != one));
    // μ({1}) = (2/3) ν({1}) = 1/3
    let mu_one = BigRational::new(2.into(), 3.into()) * rpow2(-1);
    let prob_not_one = BigRational::one() - mu_one;
    let excluded = listed && prob_not_one < BigRational::one();
    Ok(CenterTwoExclusion {
        no_pair_sums_to_one: listed,
        prob_not_one: prob_not_one.to_string(),
        excluded,
    })
}
