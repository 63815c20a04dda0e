use std::f64::consts::{FRAC_1_PI, PI};
use std::fmt::Debug;

use crate::distributions::cauchy::{std_cdf, std_density, std_inverse_density};
use crate::distributions::{Distribution, GenericDensity};

/// Symmetric, strictly unimodal density driving the mixer.
pub trait UnimodalDensity: Send + Sync + Debug {
    fn pdf(&self, x: f64) -> f64;

    fn dpdf(&self, x: f64) -> f64;

    /// Positive solution of `f(x) = y`; `+∞` for `y <= 0`.
    fn inverse_density(&self, y: f64) -> f64;

    fn cdf(&self, x: f64) -> f64;

    /// `f(x) - f(r)`.
    fn gap(&self, x: f64, r: f64) -> f64 {
        self.pdf(x) - self.pdf(r)
    }

    /// `∫_a^b f`.
    fn mass(&self, a: f64, b: f64) -> f64 {
        // the smaller tail keeps precision for far-out windows
        if a >= 0.0 {
            self.cdf(-a) - self.cdf(-b)
        } else {
            self.cdf(b) - self.cdf(a)
        }
    }

    /// `∫_a^b (x - c) f(x) dx`.
    fn moment(&self, a: f64, b: f64, c: f64) -> f64;
}

/// The standard Cauchy density `1/(π(1+x²))` with closed forms throughout.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StdCauchy;

/// `atan(u) - atan(l)` without cancellation for nearby arguments.
fn atan_diff(u: f64, l: f64) -> f64 {
    let den = 1.0 + u * l;
    if den > 0.0 {
        ((u - l) / den).atan()
    } else {
        u.atan() - l.atan()
    }
}

impl UnimodalDensity for StdCauchy {
    fn pdf(&self, x: f64) -> f64 {
        std_density(x)
    }

    fn dpdf(&self, x: f64) -> f64 {
        let d = 1.0 + x * x;
        -2.0 * FRAC_1_PI * x / (d * d)
    }

    fn inverse_density(&self, y: f64) -> f64 {
        std_inverse_density(y)
    }

    fn gap(&self, x: f64, r: f64) -> f64 {
        (r - x) * (r + x) * FRAC_1_PI / ((1.0 + x * x) * (1.0 + r * r))
    }

    fn cdf(&self, x: f64) -> f64 {
        std_cdf(x)
    }

    fn mass(&self, a: f64, b: f64) -> f64 {
        atan_diff(b, a) * FRAC_1_PI
    }

    fn moment(&self, a: f64, b: f64, c: f64) -> f64 {
        // (1/2π) ln((1+b²)/(1+a²)) - c (atan b - atan a)/π
        let log_ratio = ((b - a) * (b + a) / (1.0 + a * a)).ln_1p();
        log_ratio / (2.0 * PI) - c * self.mass(a, b)
    }
}

impl UnimodalDensity for GenericDensity {
    fn pdf(&self, x: f64) -> f64 {
        GenericDensity::pdf(self, x)
    }

    fn dpdf(&self, x: f64) -> f64 {
        GenericDensity::dpdf(self, x)
    }

    fn inverse_density(&self, y: f64) -> f64 {
        GenericDensity::inverse_density(self, y)
    }

    fn cdf(&self, x: f64) -> f64 {
        Distribution::cdf(self, x)
    }

    fn moment(&self, a: f64, b: f64, c: f64) -> f64 {
        // x g(x) is odd
        self.half_moment(b.abs()) - self.half_moment(a.abs()) - c * self.mass(a, b)
    }
}
