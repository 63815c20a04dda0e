use super::{Distribution, MeanStatus};
use crate::error::{Error, Result};

/// Uniform law on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    lo: f64,
    hi: f64,
}

impl Uniform {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::Spec(format!(
                "uniform needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Uniform { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// `E[clamp(U, a, b)] - a` for `U` uniform on `[lo, hi]`.
pub(crate) fn uniform_clamp_excess(lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    // ∫_a^b P(U > x) dx with P(U > x) piecewise linear.
    let surv_int = |x0: f64, x1: f64| -> f64 {
        // integral of (hi - x)/(hi - lo) over [x0, x1] ⊂ [lo, hi]
        ((hi - x0).powi(2) - (hi - x1).powi(2)) / (2.0 * (hi - lo))
    };
    let mut total = 0.0;
    // part below lo: survival 1
    let below = b.min(lo) - a;
    if below > 0.0 {
        total += below;
    }
    let (x0, x1) = (a.max(lo), b.min(hi));
    if x1 > x0 {
        total += surv_int(x0, x1);
    }
    total
}

impl Distribution for Uniform {
    fn cdf(&self, x: f64) -> f64 {
        ((x - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }

    fn quantile(&self, u: f64) -> f64 {
        self.lo + (self.hi - self.lo) * u
    }

    fn density(&self, x: f64) -> Option<f64> {
        Some(if x >= self.lo && x <= self.hi {
            1.0 / (self.hi - self.lo)
        } else {
            0.0
        })
    }

    fn mean_status(&self) -> MeanStatus {
        MeanStatus::Finite(0.5 * (self.lo + self.hi))
    }

    fn quantile_integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok((b - a) * (self.lo + (self.hi - self.lo) * 0.5 * (a + b)))
    }

    fn survival_integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok(uniform_clamp_excess(self.lo, self.hi, a, b))
    }
}
