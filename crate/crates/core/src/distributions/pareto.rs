use super::{Distribution, MeanStatus};
use crate::error::{Error, Result};

/// Pareto law `P(X > x) = (scale/x)^shape` on `[scale, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pareto {
    shape: f64,
    scale: f64,
}

impl Pareto {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite()) {
            return Err(Error::Spec(format!(
                "pareto needs positive shape and scale, got {shape}, {scale}"
            )));
        }
        Ok(Pareto { shape, scale })
    }
}

impl Distribution for Pareto {
    fn cdf(&self, x: f64) -> f64 {
        if x < self.scale {
            0.0
        } else {
            1.0 - (self.scale / x).powf(self.shape)
        }
    }

    fn survival(&self, x: f64) -> f64 {
        if x < self.scale {
            1.0
        } else {
            (self.scale / x).powf(self.shape)
        }
    }

    fn quantile(&self, u: f64) -> f64 {
        self.scale * (1.0 - u).powf(-1.0 / self.shape)
    }

    fn density(&self, x: f64) -> Option<f64> {
        Some(if x < self.scale {
            0.0
        } else {
            self.shape / self.scale * (self.scale / x).powf(self.shape + 1.0)
        })
    }

    fn mean_status(&self) -> MeanStatus {
        if self.shape <= 1.0 {
            MeanStatus::PosInfinite
        } else {
            MeanStatus::Finite(self.shape * self.scale / (self.shape - 1.0))
        }
    }
}
