//! Necessary conditions on centers and the exact Cauchy interval.
//!
//! For laws `μ_1, …, μ_n` with a joint mix of sum `C`, average quantiles
//! bound `C` from both sides; with identical marginals this gives the
//! interval `[a*, b*]` that must contain every `n`-center. The dual bound
//! `D(c)` caps the largest probability that a coupling puts on `{Σ = nc}`;
//! `D(c) < 1` rules `c` out.

use std::f64::consts::{FRAC_1_PI, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::cauchy::sin_pi;
use crate::distributions::{avg_quantile, iqr, Distribution, MeanStatus};
use crate::error::{domain, Result};
use crate::roots::golden_section_min;

/// Where the endpoints of a [`CenterInterval`] come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    ExactFormula,
    NumericNecessaryBound,
}

/// Closed interval `[lo, hi]` of per-variable `n`-centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterInterval {
    pub lo: f64,
    pub hi: f64,
    pub kind: IntervalKind,
    pub n: usize,
}

impl CenterInterval {
    pub fn contains(&self, c: f64) -> bool {
        self.lo <= c && c <= self.hi
    }
}

/// Marginals and window offsets for [`jm_center_bounds`].
pub struct JmBoundsInput<'a> {
    pub marginals: Vec<&'a dyn Distribution>,
    pub betas: Vec<f64>,
}

/// `Σ R_[β_i, 1-β+β_i](μ_i) <= C <= Σ R_[β-β_i, 1-β_i](μ_i)` with `β = Σ β_i`.
pub fn jm_center_bounds(input: &JmBoundsInput<'_>) -> Result<(f64, f64)> {
    if input.marginals.len() != input.betas.len() || input.marginals.len() < 2 {
        return domain(format!(
            "need n >= 2 marginals and one offset each, got {} and {}",
            input.marginals.len(),
            input.betas.len()
        ));
    }
    if input.betas.iter().any(|&b| !(b > 0.0 && b < 1.0)) {
        return domain("each offset must lie in (0,1)");
    }
    let beta: f64 = input.betas.iter().sum();
    if beta >= 1.0 {
        return domain(format!("offsets sum to {beta}, need < 1"));
    }
    let mut lower = 0.0;
    let mut upper = 0.0;
    for (mu, &bi) in input.marginals.iter().zip(&input.betas) {
        lower += avg_quantile(*mu, bi, 1.0 - beta + bi)?;
        upper += avg_quantile(*mu, beta - bi, 1.0 - bi)?;
    }
    Ok((lower, upper))
}

/// Result of [`cm_bounds`]. `alpha_a` and `alpha_b` are the window
/// parameters at which the extrema were found (0 when attained as the
/// `α ↓ 0` limit); `grid_resolution` is the final refinement bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmBounds {
    pub a_star: f64,
    pub b_star: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub grid_resolution: f64,
}

impl CmBounds {
    pub fn interval(&self, n: usize) -> CenterInterval {
        CenterInterval {
            lo: self.a_star,
            hi: self.b_star,
            kind: IntervalKind::NumericNecessaryBound,
            n,
        }
    }
}

const CM_GRID: usize = 64;
const CM_ALPHA_MIN: f64 = 1e-6;
const CM_REFINE_TOL: f64 = 1e-10;
const CM_PROBE_STEPS: usize = 6;

/// `a* = sup_α R_[α, 1-(n-1)α](μ)` and `b* = inf_α R_[(n-1)α, 1-α](μ)`
/// over `α ∈ (0, 1/n)`.
///
/// The search runs on 64 log-spaced `α` in `[1e-6, 1/n - 1e-6]` and refines
/// around the best grid point by golden section; an extremum at the lower
/// edge is followed down to `α = 2^-38`. A finite declared mean is
/// the common `α ↓ 0` limit of both windows and joins the candidates; a
/// declared `+∞` mean sends `a*` to `+∞` (and `-∞` sends `b*` to `-∞`).
pub fn cm_bounds(mu: &dyn Distribution, n: usize) -> Result<CmBounds> {
    if n < 2 {
        return domain(format!("n must be at least 2, got {n}"));
    }
    let nf = n as f64;
    let hi = 1.0 / nf - CM_ALPHA_MIN;
    let (l0, l1) = (CM_ALPHA_MIN.ln(), hi.ln());
    let grid: Vec<f64> = (0..CM_GRID)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (CM_GRID - 1) as f64).exp())
        .collect();

    let lower_window = |a: f64| avg_quantile(mu, a, 1.0 - (nf - 1.0) * a);
    let upper_window = |a: f64| avg_quantile(mu, (nf - 1.0) * a, 1.0 - a);

    let lows: Vec<f64> = grid
        .par_iter()
        .map(|&a| lower_window(a))
        .collect::<Result<_>>()?;
    let ups: Vec<f64> = grid
        .par_iter()
        .map(|&a| upper_window(a))
        .collect::<Result<_>>()?;

    let refine = |values: &[f64], sign: f64, eval: &dyn Fn(f64) -> Result<f64>| -> (f64, f64) {
        // minimize sign * value in log α
        let (i, _) = values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| {
                if sign * v < acc.1 {
                    (i, sign * v)
                } else {
                    acc
                }
            });
        let lo = grid[i.saturating_sub(1)].ln();
        let hi = grid[(i + 1).min(CM_GRID - 1)].ln();
        let (la, v) = golden_section_min(
            |la| eval(la.exp()).map(|r| sign * r).unwrap_or(f64::INFINITY),
            lo,
            hi,
            CM_REFINE_TOL,
        );
        (la.exp(), sign * v)
    };

    let (mut alpha_a, mut a_star) = refine(&lows, -1.0, &lower_window);
    let (mut alpha_b, mut b_star) = refine(&ups, 1.0, &upper_window);
    // An extremum at the lower grid edge is chased toward α ↓ 0.
    let probe = |alpha: &mut f64, value: &mut f64, sign: f64, eval: &dyn Fn(f64) -> Result<f64>| {
        if *alpha > 1.01 * CM_ALPHA_MIN {
            return;
        }
        // dyadic levels keep both window ends exact in floating point
        for k in 0..CM_PROBE_STEPS {
            let a = 2f64.powi(-23 - 3 * k as i32);
            match eval(a) {
                Ok(v) if v.is_finite() => {
                    if sign * v < sign * *value {
                        *alpha = a;
                        *value = v;
                    }
                }
                _ => break,
            }
        }
    };
    probe(&mut alpha_a, &mut a_star, -1.0, &lower_window);
    probe(&mut alpha_b, &mut b_star, 1.0, &upper_window);

    match mu.mean_status() {
        MeanStatus::Finite(m) => {
            if m >= a_star {
                a_star = m;
                alpha_a = 0.0;
            }
            if m <= b_star {
                b_star = m;
                alpha_b = 0.0;
            }
        }
        MeanStatus::PosInfinite => {
            a_star = f64::INFINITY;
            alpha_a = 0.0;
        }
        MeanStatus::NegInfinite => {
            b_star = f64::NEG_INFINITY;
            alpha_b = 0.0;
        }
        MeanStatus::Undefined => {}
    }
    Ok(CmBounds {
        a_star,
        b_star,
        alpha_a,
        alpha_b,
        grid_resolution: CM_REFINE_TOL,
    })
}

/// `R_[(n-1)α, 1-α]` of the standard Cauchy law:
/// `(1/(1-nα)) (1/π) ln(sin(π(n-1)α) / sin(πα))`.
///
/// Within 1e-9 of `α = 1/n` the ratio is replaced by its expansion in
/// `ε = 1 - nα`: `cot(π/n) - ε π (n-2) / (2n sin²(π/n))`.
pub fn cauchy_r_closed_form(n: usize, alpha: f64) -> Result<f64> {
    if n < 2 {
        return domain(format!("n must be at least 2, got {n}"));
    }
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < 1.0 / nf) {
        return domain(format!("alpha must lie in (0, 1/{n}), got {alpha}"));
    }
    if n == 2 {
        return Ok(0.0);
    }
    let eps = 1.0 - nf * alpha;
    if (1.0 / nf - alpha) <= 1e-9 {
        return Ok(cauchy_r_series(n, eps));
    }
    Ok(FRAC_1_PI * (sin_pi((nf - 1.0) * alpha) / sin_pi(alpha)).ln() / eps)
}

fn cauchy_r_series(n: usize, eps: f64) -> f64 {
    let nf = n as f64;
    let theta = PI / nf;
    let s = theta.sin();
    1.0 / theta.tan() - eps * PI * (nf - 2.0) / (2.0 * nf * s * s)
}

/// The exact set `[-ln(n-1)/π, ln(n-1)/π]` of `n`-centers of the standard
/// Cauchy law.
pub fn cauchy_center_interval(n: usize) -> Result<CenterInterval> {
    if n < 2 {
        return domain(format!("n must be at least 2, got {n}"));
    }
    let hi = ((n - 1) as f64).ln() * FRAC_1_PI;
    Ok(CenterInterval {
        lo: if hi == 0.0 { 0.0 } else { -hi },
        hi,
        kind: IntervalKind::ExactFormula,
        n,
    })
}

/// `α <= 1 - (y-x)/(n(q-x))`, with 1e-12 slack on the boundary: the mean
/// inequality for `α δ_x + (1-α) ν`, where `ν` lives on `[x, y]` with a
/// non-increasing density and mean `q`.
pub fn mean_inequality_check(alpha: f64, x: f64, y: f64, q: f64, n: usize) -> Result<bool> {
    if q <= x {
        return domain(format!("need q > x, got q = {q}, x = {x}"));
    }
    if !(x < y && q <= y) {
        return domain(format!(
            "need x < y and q <= y, got x = {x}, y = {y}, q = {q}"
        ));
    }
    if !(0.0..=1.0).contains(&alpha) || n < 2 {
        return domain(format!("need alpha in [0,1] and n >= 2, got {alpha}, {n}"));
    }
    Ok(alpha <= 1.0 - (y - x) / (n as f64 * (q - x)) + 1e-12)
}

/// `(m - (1-nα) R_[(n-1)α, 1-α](μ)) / α` for a law with finite mean `m`.
/// As `α ↓ 0` this tends to `y + (n-1)x` for support endpoints `x <= y`, so
/// `c <= b*` forces `y + (n-1)x <= nc`.
pub fn mean_inequality_limit(mu: &dyn Distribution, n: usize, alpha: f64) -> Result<f64> {
    let MeanStatus::Finite(m) = mu.mean_status() else {
        return domain("the mean-inequality limit needs a finite mean");
    };
    let nf = n as f64;
    if n < 2 || !(alpha > 0.0 && alpha < 1.0 / nf) {
        return domain(format!(
            "need n >= 2 and alpha in (0, 1/n), got {n}, {alpha}"
        ));
    }
    let inner = mu.quantile_integral((nf - 1.0) * alpha, 1.0 - alpha)?;
    Ok((m - inner) / alpha)
}

/// Value of the dual bound and where the infimum was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualBound {
    pub value: f64,
    pub t_argmin: f64,
    /// Width of the final refinement bracket in `t`; the reported value is
    /// an upper estimate of the infimum at this resolution.
    pub grid_resolution: f64,
}

const DUAL_GRID: usize = 256;

/// `D(c) = inf_{t<c} ∫_t^{nc-(n-1)t} F̄(x) dx / (c-t)`.
///
/// With `d = c - t` the window is `[c-d, c+(n-1)d]`. The search covers 256
/// log-spaced `d` in `[1e-6 T, T]`, `T = 50 max(IQR, 1)`, then refines the
/// best bracket by golden section in `ln d`.
pub fn dual_bound(mu: &dyn Distribution, n: usize, c: f64) -> Result<DualBound> {
    if n < 2 {
        return domain(format!("n must be at least 2, got {n}"));
    }
    if !c.is_finite() {
        return domain(format!("center must be finite, got {c}"));
    }
    let nf = n as f64;
    let span = 50.0 * iqr(mu).max(1.0);
    let (l0, l1) = ((1e-6 * span).ln(), span.ln());
    let ratio =
        |d: f64| -> Result<f64> { Ok(mu.survival_integral(c - d, c + (nf - 1.0) * d)? / d) };
    let grid: Vec<f64> = (0..DUAL_GRID)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (DUAL_GRID - 1) as f64).exp())
        .collect();
    let values: Vec<f64> = grid.par_iter().map(|&d| ratio(d)).collect::<Result<_>>()?;
    let (i, _) =
        values.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc },
        );
    let lo = grid[i.saturating_sub(1)].ln();
    let hi = grid[(i + 1).min(DUAL_GRID - 1)].ln();
    let tol = 1e-10;
    let (ld, v) = golden_section_min(|ld| ratio(ld.exp()).unwrap_or(f64::INFINITY), lo, hi, tol);
    let d = ld.exp();
    Ok(DualBound {
        value: v.min(values[i]),
        t_argmin: if v <= values[i] { c - d } else { c - grid[i] },
        grid_resolution: d * tol,
    })
}

/// Outcome of [`infinite_mean_classifier`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanVerdict {
    /// No joint mix exists.
    Excluded,
    Inconclusive,
}

/// Excludes joint mixability when every mean lies in `(-∞, ∞]` and one is
/// `+∞` (or, mirrored, every mean lies in `[-∞, ∞)` and one is `-∞`).
pub fn infinite_mean_classifier(marginals: &[&dyn Distribution]) -> MeanVerdict {
    let status: Vec<MeanStatus> = marginals.iter().map(|m| m.mean_status()).collect();
    let all_not = |bad: fn(&MeanStatus) -> bool| status.iter().all(|s| !bad(s));
    let pos = status.contains(&MeanStatus::PosInfinite)
        && all_not(|s| matches!(s, MeanStatus::NegInfinite | MeanStatus::Undefined));
    let neg = status.contains(&MeanStatus::NegInfinite)
        && all_not(|s| matches!(s, MeanStatus::PosInfinite | MeanStatus::Undefined));
    if pos || neg {
        MeanVerdict::Excluded
    } else {
        MeanVerdict::Inconclusive
    }
}
