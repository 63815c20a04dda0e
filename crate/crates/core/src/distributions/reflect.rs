use rand::RngCore;

use super::{Distribution, MeanStatus};
use crate::error::Result;

/// Law of `-X`.
///
/// The quantile is `-q_X(1-u)`, which coincides with the left-continuous
/// inverse except at the (null) set of levels bounding an atom's plateau.
#[derive(Debug, Clone)]
pub struct Reflected<D> {
    inner: D,
}

impl<D: Distribution> Reflected<D> {
    pub fn new(inner: D) -> Self {
        Reflected { inner }
    }

    pub fn inner(&self) -> &D {
        &self.inner
    }
}

impl<D: Distribution> Distribution for Reflected<D> {
    fn cdf(&self, x: f64) -> f64 {
        1.0 - self.inner.cdf_left(-x)
    }

    fn cdf_left(&self, x: f64) -> f64 {
        1.0 - self.inner.cdf(-x)
    }

    fn quantile(&self, u: f64) -> f64 {
        -self.inner.quantile(1.0 - u)
    }

    fn density(&self, x: f64) -> Option<f64> {
        self.inner.density(-x)
    }

    fn mean_status(&self) -> MeanStatus {
        self.inner.mean_status().negate()
    }

    fn quantile_integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok(-self.inner.quantile_integral(1.0 - b, 1.0 - a)?)
    }

    fn survival_integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok((b - a) - self.inner.survival_integral(-b, -a)?)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        -self.inner.sample(rng)
    }
}
