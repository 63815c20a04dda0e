//! One-dimensional laws: quantiles, cdfs, densities, truncated moments and
//! exact samplers for every model used by the bounds and constructions.
//!
//! All models are immutable once built. Samplers borrow an RNG owned by the
//! caller.

mod atom_uniform;
pub(crate) mod cauchy;
mod discrete;
mod ex01;
mod generic;
mod pareto;
mod reflect;
mod spec;
mod uniform;

pub use atom_uniform::AtomPlusUniform;
pub use cauchy::{cauchy_inverse_density, cauchy_quantile, Cauchy};
pub use discrete::FiniteDiscrete;
pub use ex01::{CountableDiscreteEx01, Ex01Kind};
pub use generic::GenericDensity;
pub use pareto::Pareto;
pub use reflect::Reflected;
pub use spec::DistributionSpec;
pub use uniform::Uniform;

use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::{integrate_with_breaks, unit_endpoint_breaks, QuadOptions};
use crate::rng::open01;

/// What a model declares about its first moment.
///
/// Declared rather than inferred: numerically detecting a divergent tail
/// integral is unreliable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "value")]
pub enum MeanStatus {
    Finite(f64),
    PosInfinite,
    NegInfinite,
    Undefined,
}

impl MeanStatus {
    pub fn negate(self) -> MeanStatus {
        match self {
            MeanStatus::Finite(m) => MeanStatus::Finite(-m),
            MeanStatus::PosInfinite => MeanStatus::NegInfinite,
            MeanStatus::NegInfinite => MeanStatus::PosInfinite,
            MeanStatus::Undefined => MeanStatus::Undefined,
        }
    }
}

/// A one-dimensional probability law.
pub trait Distribution: Send + Sync + fmt::Debug {
    /// `P(X <= x)`.
    fn cdf(&self, x: f64) -> f64;

    /// `P(X < x)`; equals `cdf` for laws without atoms.
    fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x)
    }

    /// Left-continuous generalized inverse `inf{x : F(x) >= u}` for `u` in (0,1).
    fn quantile(&self, u: f64) -> f64;

    /// Lebesgue density, when the law has one.
    fn density(&self, _x: f64) -> Option<f64> {
        None
    }

    fn mean_status(&self) -> MeanStatus;

    /// `P(X > x)`.
    fn survival(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// `∫_a^b q(u) du` for `0 < a <= b < 1`.
    fn quantile_integral(&self, a: f64, b: f64) -> Result<f64> {
        let breaks = unit_endpoint_breaks(a, b);
        let opts = QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-13,
            max_intervals: 20_000,
        };
        Ok(integrate_with_breaks(|u| self.quantile(u), a, b, &breaks, opts)?.value)
    }

    /// `∫_a^b P(X > x) dx` for `a <= b`.
    fn survival_integral(&self, a: f64, b: f64) -> Result<f64> {
        let opts = QuadOptions {
            abs_tol: 1e-11,
            rel_tol: 1e-13,
            max_intervals: 20_000,
        };
        let mut breaks = Vec::new();
        for u in [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
            breaks.push(self.quantile(u));
        }
        Ok(integrate_with_breaks(|x| self.survival(x), a, b, &breaks, opts)?.value)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.quantile(open01(rng))
    }
}

/// Average quantile `(1/(β-α)) ∫_α^β q(u) du`.
pub fn avg_quantile(dist: &dyn Distribution, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < beta && beta < 1.0) {
        return domain(format!(
            "average quantile needs 0 < alpha < beta < 1, got [{alpha}, {beta}]"
        ));
    }
    Ok(dist.quantile_integral(alpha, beta)? / (beta - alpha))
}

/// `count` i.i.d. draws.
pub fn sample(dist: &dyn Distribution, rng: &mut dyn RngCore, count: usize) -> Vec<f64> {
    (0..count).map(|_| dist.sample(rng)).collect()
}

/// Interquartile range, used to scale search windows.
pub fn iqr(dist: &dyn Distribution) -> f64 {
    dist.quantile(0.75) - dist.quantile(0.25)
}

/// Exact `∫_a^b q(u) du` for a law given as plateaus `(value, cdf_lo, cdf_hi)`
/// on which the quantile is constant.
pub(crate) fn plateau_integral<I>(plateaus: I, a: f64, b: f64) -> f64
where
    I: IntoIterator<Item = (f64, f64, f64)>,
{
    plateaus
        .into_iter()
        .map(|(v, lo, hi)| {
            let w = hi.min(b) - lo.max(a);
            if w > 0.0 {
                v * w
            } else {
                0.0
            }
        })
        .sum()
}

/// Exact `∫_a^b P(X > x) dx = E[clamp(X, a, b)] - a` for atoms `(value, prob)`.
pub(crate) fn atomic_survival_integral<I>(atoms: I, a: f64, b: f64) -> f64
where
    I: IntoIterator<Item = (f64, f64)>,
{
    atoms
        .into_iter()
        .map(|(v, p)| p * (v.clamp(a, b) - a))
        .sum()
}
