use std::f64::consts::{FRAC_1_PI, PI};

use rand::RngCore;

use super::{Distribution, MeanStatus};
use crate::error::{domain, Result};
use crate::rng::open01;

/// Centered Cauchy law with the given scale; `Cauchy::standard()` has
/// density `1/(π(1+x²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cauchy {
    scale: f64,
}

impl Cauchy {
    pub fn standard() -> Self {
        Cauchy { scale: 1.0 }
    }

    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return domain(format!("Cauchy scale must be positive, got {scale}"));
        }
        Ok(Cauchy { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Closed form `∫_a^b q(u) du = (σ/π) ln(sin πa / sin πb)`.
    pub fn quantile_integral_exact(&self, a: f64, b: f64) -> f64 {
        self.scale * FRAC_1_PI * (sin_pi(a) / sin_pi(b)).ln()
    }
}

/// `sin(πu)` for `u` in [0,1], accurate near both ends.
pub(crate) fn sin_pi(u: f64) -> f64 {
    if u <= 0.5 {
        (PI * u).sin()
    } else {
        (PI * (1.0 - u)).sin()
    }
}

/// Standard Cauchy quantile `tan(π(u - 1/2))`.
pub fn cauchy_quantile(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return domain(format!("quantile level must lie in (0,1), got {u}"));
    }
    Ok(std_quantile(u))
}

// tan(π(u-1/2)) = -cot(πu); the two branches keep full relative accuracy in
// both tails (1-u is exact for u >= 1/2).
pub(crate) fn std_quantile(u: f64) -> f64 {
    if u == 0.5 {
        0.0
    } else if u < 0.5 {
        -1.0 / (PI * u).tan()
    } else {
        1.0 / (PI * (1.0 - u)).tan()
    }
}

pub(crate) fn std_cdf(x: f64) -> f64 {
    if x < -1.0 {
        (-1.0 / x).atan() * FRAC_1_PI
    } else {
        0.5 + x.atan() * FRAC_1_PI
    }
}

pub(crate) fn std_density(x: f64) -> f64 {
    FRAC_1_PI / (1.0 + x * x)
}

/// Positive solution of `f(x) = y` for the standard Cauchy density:
/// `sqrt(1/(πy) - 1)`, with `+∞` for `y <= 0`.
pub fn cauchy_inverse_density(y: f64) -> Result<f64> {
    if y > FRAC_1_PI {
        return domain(format!("density level {y} exceeds the Cauchy mode 1/π"));
    }
    Ok(std_inverse_density(y))
}

pub(crate) fn std_inverse_density(y: f64) -> f64 {
    if y <= 0.0 {
        f64::INFINITY
    } else if y >= FRAC_1_PI {
        0.0
    } else {
        let py = PI * y;
        ((1.0 - py) / py).sqrt()
    }
}

impl Distribution for Cauchy {
    fn cdf(&self, x: f64) -> f64 {
        std_cdf(x / self.scale)
    }

    fn survival(&self, x: f64) -> f64 {
        std_cdf(-x / self.scale)
    }

    fn quantile(&self, u: f64) -> f64 {
        self.scale * std_quantile(u)
    }

    fn density(&self, x: f64) -> Option<f64> {
        Some(std_density(x / self.scale) / self.scale)
    }

    fn mean_status(&self) -> MeanStatus {
        MeanStatus::Undefined
    }

    /// `∫_a^b F̄(x) dx` from the antiderivative `x F̄(x) + ln(1+x²)/(2π)`.
    fn survival_integral(&self, a: f64, b: f64) -> Result<f64> {
        let s = self.scale;
        let h = |x: f64| x * std_cdf(-x) + 0.5 * FRAC_1_PI * (x * x).ln_1p();
        Ok(s * (h(b / s) - h(a / s)))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.scale * std_quantile(open01(rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    #[test]
    fn quantile_examples() {
        assert_eq!(cauchy_quantile(0.5).unwrap(), 0.0);
        assert!((cauchy_quantile(0.75).unwrap() - 1.0).abs() < 1e-15);
        assert!((cauchy_quantile(0.9).unwrap() - 3.077_683_5).abs() < 1e-7);
        assert!(cauchy_quantile(0.0).is_err());
        assert!(cauchy_quantile(1.0).is_err());
        assert!(cauchy_quantile(f64::NAN).is_err());
    }

    #[test]
    fn quantile_inverts_cdf() {
        let c = Cauchy::standard();
        for i in -1000..=1000 {
            let x = i as f64 * 0.1;
            assert!((c.quantile(c.cdf(x)) - x).abs() <= 1e-9, "{x}");
        }
    }

    #[test]
    fn density_integrates_to_one() {
        let c = Cauchy::standard();
        // ∫_{-L}^{L} f + 2 F̄(L), with the tail in closed form
        let l = 1e3;
        let body = integrate(|x| c.density(x).unwrap(), -l, l).unwrap().value;
        assert!((body + 2.0 * c.survival(l) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_density_examples() {
        assert_eq!(cauchy_inverse_density(FRAC_1_PI).unwrap(), 0.0);
        assert!((cauchy_inverse_density(1.0 / (2.0 * PI)).unwrap() - 1.0).abs() < 1e-14);
        assert!((cauchy_inverse_density(1.0 / (5.0 * PI)).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(cauchy_inverse_density(0.0).unwrap(), f64::INFINITY);
        assert_eq!(cauchy_inverse_density(-1.0).unwrap(), f64::INFINITY);
        assert!(cauchy_inverse_density(0.4).is_err());
        for i in 1..100 {
            let y = FRAC_1_PI * i as f64 / 100.0;
            let x = cauchy_inverse_density(y).unwrap();
            assert!((std_density(x) - y).abs() <= 1e-12, "{y}");
        }
    }

    #[test]
    fn survival_integral_matches_quadrature() {
        let c = Cauchy::standard();
        for (a, b) in [
            (-3.0, 2.0),
            (-50.0, -10.0),
            (0.5, 40.0),
            (-200.0, 400.0),
            (-1.0, -0.5),
        ] {
            let exact = c.survival_integral(a, b).unwrap();
            let quad = integrate(|x| c.survival(x), a, b).unwrap().value;
            assert!((exact - quad).abs() < 1e-9, "[{a},{b}] {exact} vs {quad}");
        }
    }

    #[test]
    fn closed_form_quantile_integral() {
        let c = Cauchy::standard();
        let exact = c.quantile_integral_exact(0.2, 0.9) / 0.7;
        let quad = integrate(|u| c.quantile(u), 0.2, 0.9).unwrap().value / 0.7;
        assert!((exact - quad).abs() < 1e-10, "{exact} vs {quad}");
    }
}
