//! The integer-valued laws built from a geometric variable `Z` with
//! `P(Z = k) = 2^-(k+1)`:
//!
//! * `ν`, the law of `2^Z`: `P(1) = 1/2`, `P(2^k) = 2^-(k+1)` for `k >= 1`;
//! * `γ`, the law of `-2^(Z+1)`: `P(-2^(k+1)) = 2^-(k+1)` for `k >= 0`;
//! * `μ = (2ν + γ)/3`.
//!
//! Quantiles, cdfs and window integrals are computed on the untruncated
//! laws (any window inside (0,1) touches finitely many atoms). The
//! truncation level only controls the listed atoms.

use serde::{Deserialize, Serialize};

use super::{plateau_integral, Distribution, MeanStatus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ex01Kind {
    Nu,
    Gamma,
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountableDiscreteEx01 {
    kind: Ex01Kind,
    truncation_k: u32,
}

fn pow2(k: i32) -> f64 {
    2f64.powi(k)
}

/// Largest `k >= 0` with `2^k <= x`, for `x >= 1`.
fn floor_log2(x: f64) -> i32 {
    let mut k = x.log2().floor() as i32;
    while pow2(k) > x {
        k -= 1;
    }
    while pow2(k + 1) <= x {
        k += 1;
    }
    k
}

// ν: atom k (value 2^k) occupies cdf levels (1 - 2^-k, 1 - 2^-(k+1)];
// for k = 0 that is (0, 1/2].
fn nu_cdf(x: f64) -> f64 {
    if x < 1.0 {
        0.0
    } else {
        1.0 - pow2(-(floor_log2(x) + 1))
    }
}

fn nu_quantile(u: f64) -> f64 {
    // smallest k with 2^-(k+1) <= 1 - u
    let tail = 1.0 - u;
    let mut k = ((-tail.log2()).ceil() as i32 - 1).max(0);
    while k > 0 && pow2(-k) <= tail {
        k -= 1;
    }
    while pow2(-(k + 1)) > tail {
        k += 1;
    }
    pow2(k)
}

fn nu_plateaus(b: f64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let lo = if k == 0 { 0.0 } else { 1.0 - pow2(-k) };
        if lo >= b {
            break;
        }
        out.push((pow2(k), lo, 1.0 - pow2(-(k + 1))));
        k += 1;
    }
    out
}

// γ: atom k (value -2^(k+1)) occupies cdf levels (2^-(k+1), 2^-k].
fn gamma_cdf(x: f64) -> f64 {
    if x >= -2.0 {
        return 1.0;
    }
    // smallest j with 2^(j+1) >= -x
    let mut j = floor_log2(-x) - 1;
    if pow2(j + 1) < -x {
        j += 1;
    }
    pow2(-j)
}

fn gamma_cdf_left(x: f64) -> f64 {
    if x > -2.0 {
        return 1.0;
    }
    // atoms strictly below x: 2^(j+1) > -x
    let mut j = floor_log2(-x) - 1;
    while pow2(j + 1) <= -x {
        j += 1;
    }
    pow2(-j)
}

fn gamma_quantile(u: f64) -> f64 {
    // k with 2^-(k+1) < u <= 2^-k
    let mut k = (-u.log2()).floor().max(0.0) as i32;
    while k > 0 && pow2(-k) < u {
        k -= 1;
    }
    while pow2(-(k + 1)) >= u {
        k += 1;
    }
    -pow2(k + 1)
}

fn gamma_plateaus(a: f64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let hi = pow2(-k);
        if hi <= a {
            break;
        }
        out.push((-pow2(k + 1), pow2(-(k + 1)), hi));
        k += 1;
    }
    out
}

impl CountableDiscreteEx01 {
    pub fn new(kind: Ex01Kind, truncation_k: u32) -> Result<Self> {
        if truncation_k == 0 || truncation_k > 1000 {
            return Err(Error::Spec(format!(
                "truncation level must lie in 1..=1000, got {truncation_k}"
            )));
        }
        Ok(CountableDiscreteEx01 { kind, truncation_k })
    }

    pub fn kind(&self) -> Ex01Kind {
        self.kind
    }

    pub fn truncation_k(&self) -> u32 {
        self.truncation_k
    }

    /// Mass not covered by [`Self::truncated_atoms`]: `2^-(K+1)`.
    pub fn truncated_mass_deficit(&self) -> f64 {
        pow2(-(self.truncation_k as i32 + 1))
    }

    /// Atoms for `k = 0..=K`, sorted by value.
    pub fn truncated_atoms(&self) -> Vec<(f64, f64)> {
        let k_max = self.truncation_k as i32;
        let nu = || (0..=k_max).map(|k| (pow2(k), pow2(-(k + 1))));
        let gamma = || (0..=k_max).rev().map(|k| (-pow2(k + 1), pow2(-(k + 1))));
        match self.kind {
            Ex01Kind::Nu => nu().collect(),
            Ex01Kind::Gamma => gamma().collect(),
            Ex01Kind::Mu => gamma()
                .map(|(v, p)| (v, p / 3.0))
                .chain(nu().map(|(v, p)| (v, 2.0 * p / 3.0)))
                .collect(),
        }
    }

    fn plateaus(&self, a: f64, b: f64) -> Vec<(f64, f64, f64)> {
        match self.kind {
            Ex01Kind::Nu => nu_plateaus(b),
            Ex01Kind::Gamma => gamma_plateaus(a),
            Ex01Kind::Mu => {
                let third = 1.0 / 3.0;
                let mut out: Vec<(f64, f64, f64)> = gamma_plateaus(3.0 * a)
                    .into_iter()
                    .map(|(v, lo, hi)| (v, lo * third, hi * third))
                    .collect();
                out.extend(
                    nu_plateaus((3.0 * b - 1.0) / 2.0)
                        .into_iter()
                        .map(|(v, lo, hi)| (v, third + 2.0 * lo * third, third + 2.0 * hi * third)),
                );
                out
            }
        }
    }
}

impl Distribution for CountableDiscreteEx01 {
    fn cdf(&self, x: f64) -> f64 {
        match self.kind {
            Ex01Kind::Nu => nu_cdf(x),
            Ex01Kind::Gamma => gamma_cdf(x),
            Ex01Kind::Mu => (gamma_cdf(x) + 2.0 * nu_cdf(x)) / 3.0,
        }
    }

    fn cdf_left(&self, x: f64) -> f64 {
        let nu_left = |x: f64| {
            if x <= 1.0 {
                0.0
            } else {
                // atoms strictly below x
                let k = floor_log2(x);
                let k = if pow2(k) == x { k - 1 } else { k };
                1.0 - pow2(-(k + 1))
            }
        };
        match self.kind {
            Ex01Kind::Nu => nu_left(x),
            Ex01Kind::Gamma => gamma_cdf_left(x),
            Ex01Kind::Mu => (gamma_cdf_left(x) + 2.0 * nu_left(x)) / 3.0,
        }
    }

    fn quantile(&self, u: f64) -> f64 {
        match self.kind {
            Ex01Kind::Nu => nu_quantile(u),
            Ex01Kind::Gamma => gamma_quantile(u),
            Ex01Kind::Mu => {
                if u <= 1.0 / 3.0 {
                    gamma_quantile((3.0 * u).min(1.0))
                } else {
                    nu_quantile((3.0 * u - 1.0) / 2.0)
                }
            }
        }
    }

    fn mean_status(&self) -> MeanStatus {
        match self.kind {
            Ex01Kind::Nu => MeanStatus::PosInfinite,
            Ex01Kind::Gamma => MeanStatus::NegInfinite,
            Ex01Kind::Mu => MeanStatus::Undefined,
        }
    }

    fn quantile_integral(&self, a: f64, b: f64) -> Result<f64> {
        match self.kind {
            Ex01Kind::Nu | Ex01Kind::Gamma => Ok(plateau_integral(self.plateaus(a, b), a, b)),
            Ex01Kind::Mu => {
                // Split at level 1/3 and integrate each component in its own
                // level coordinates, where plateau ends are dyadic.
                let mut total = 0.0;
                if a < 1.0 / 3.0 {
                    let (ga, gb) = (3.0 * a, (3.0 * b).min(1.0));
                    total += plateau_integral(gamma_plateaus(ga), ga, gb) / 3.0;
                }
                if b > 1.0 / 3.0 {
                    let (na, nb) = (((3.0 * a - 1.0) / 2.0).max(0.0), (3.0 * b - 1.0) / 2.0);
                    total += 2.0 * plateau_integral(nu_plateaus(nb), na, nb) / 3.0;
                }
                Ok(total)
            }
        }
    }

    fn survival_integral(&self, a: f64, b: f64) -> Result<f64> {
        // Σ_{a<v<b} p (v - a) + (b - a) P(X >= b)
        let atoms_inside: f64 = self
            .plateaus(1e-300, 1.0 - 1e-16)
            .into_iter()
            .filter(|&(v, _, _)| v > a && v < b)
            .map(|(v, lo, hi)| (hi - lo) * (v - a))
            .sum();
        Ok(atoms_inside + (b - a) * (1.0 - self.cdf_left(b)))
    }
}
