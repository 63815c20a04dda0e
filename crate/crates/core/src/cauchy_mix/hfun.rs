use serde::Serialize;

use super::kernel::MuTComponents;
use crate::error::{Error, Result};

/// Tabulated `h(t)` with a monotone cubic Hermite interpolant.
///
/// Knot slopes start from the implicit-function derivative and are limited
/// (Fritsch–Carlson) so the interpolant is non-increasing whenever the knot
/// values are.
#[derive(Debug, Clone, Serialize)]
pub struct HFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl HFunction {
    /// Builds the interpolant from component data at increasing `t`.
    pub fn from_components(comps: &[MuTComponents], c: f64) -> Result<Self> {
        if comps.len() < 2 {
            return Err(Error::Domain("h needs at least two knots".into()));
        }
        if comps.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Domain("h knots must be strictly increasing".into()));
        }
        let knots: Vec<f64> = comps.iter().map(|k| k.t).collect();
        let values: Vec<f64> = comps.iter().map(|k| k.h).collect();
        let mut slopes: Vec<f64> = comps.iter().map(|k| k.h_prime(c)).collect();
        for j in 0..knots.len() - 1 {
            let delta = (values[j + 1] - values[j]) / (knots[j + 1] - knots[j]);
            if delta == 0.0 {
                slopes[j] = 0.0;
                slopes[j + 1] = 0.0;
                continue;
            }
            let a = slopes[j] / delta;
            let b = slopes[j + 1] / delta;
            if a < 0.0 {
                slopes[j] = 0.0;
            }
            if b < 0.0 {
                slopes[j + 1] = 0.0;
            }
            let r = a.max(0.0).hypot(b.max(0.0));
            if r > 3.0 {
                slopes[j] *= 3.0 / r;
                slopes[j + 1] *= 3.0 / r;
            }
        }
        Ok(HFunction {
            knots,
            values,
            slopes,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest increase `h_{j+1} - h_j` over consecutive knots (0 when
    /// non-increasing).
    pub fn max_increase(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    // interval index and local coordinate; clamped to the knot range
    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let last = self.knots.len() - 1;
        let t = t.clamp(self.knots[0], self.knots[last]);
        let j = self.knots.partition_point(|&k| k <= t).clamp(1, last) - 1;
        let dt = self.knots[j + 1] - self.knots[j];
        (j, (t - self.knots[j]) / dt, dt)
    }

    /// `h(t)`, clamped to the end values outside the knot range.
    pub fn value(&self, t: f64) -> f64 {
        let (j, s, dt) = self.locate(t);
        let (h0, h1) = (self.values[j], self.values[j + 1]);
        let (d0, d1) = (self.slopes[j] * dt, self.slopes[j + 1] * dt);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * h0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * h1
            + (s3 - s2) * d1
    }

    /// `h'(t)` of the interpolant.
    pub fn derivative(&self, t: f64) -> f64 {
        let (j, s, dt) = self.locate(t);
        let (h0, h1) = (self.values[j], self.values[j + 1]);
        let (d0, d1) = (self.slopes[j] * dt, self.slopes[j + 1] * dt);
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * h0
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (-6.0 * s2 + 6.0 * s) * h1
            + (3.0 * s2 - 2.0 * s) * d1)
            / dt
    }
}
