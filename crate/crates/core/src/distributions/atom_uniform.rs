use super::uniform::uniform_clamp_excess;
use super::{Distribution, MeanStatus};
use crate::error::{Error, Result};

/// `α δ_x + (1-α) U[x, y]`: an atom at the left end of a uniform block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPlusUniform {
    atom_x: f64,
    right_y: f64,
    atom_weight: f64,
}

impl AtomPlusUniform {
    pub fn new(atom_x: f64, right_y: f64, atom_weight: f64) -> Result<Self> {
        if !(atom_x < right_y && atom_x.is_finite() && right_y.is_finite()) {
            return Err(Error::Spec(format!(
                "atom+uniform needs x < y, got x={atom_x}, y={right_y}"
            )));
        }
        if !(0.0..=1.0).contains(&atom_weight) {
            return Err(Error::Spec(format!(
                "atom weight {atom_weight} outside [0,1]"
            )));
        }
        Ok(AtomPlusUniform {
            atom_x,
            right_y,
            atom_weight,
        })
    }

    pub fn atom_x(&self) -> f64 {
        self.atom_x
    }

    pub fn right_y(&self) -> f64 {
        self.right_y
    }

    pub fn atom_weight(&self) -> f64 {
        self.atom_weight
    }

    pub fn mean(&self) -> f64 {
        let a = self.atom_weight;
        a * self.atom_x + (1.0 - a) * 0.5 * (self.atom_x + self.right_y)
    }

    fn width(&self) -> f64 {
        self.right_y - self.atom_x
    }
}

impl Distribution for AtomPlusUniform {
    fn cdf(&self, x: f64) -> f64 {
        if x < self.atom_x {
            0.0
        } else if x >= self.right_y {
            1.0
        } else {
            self.atom_weight + (1.0 - self.atom_weight) * (x - self.atom_x) / self.width()
        }
    }

    fn cdf_left(&self, x: f64) -> f64 {
        if x <= self.atom_x {
            0.0
        } else {
            self.cdf(x)
        }
    }

    fn quantile(&self, u: f64) -> f64 {
        let a = self.atom_weight;
        if u <= a {
            self.atom_x
        } else {
            self.atom_x + self.width() * (u - a) / (1.0 - a)
        }
    }

    fn mean_status(&self) -> MeanStatus {
        MeanStatus::Finite(self.mean())
    }

    fn quantile_integral(&self, lo: f64, hi: f64) -> Result<f64> {
        let a = self.atom_weight;
        let mut total = self.atom_x * (hi - lo);
        let s = lo.max(a);
        if hi > s {
            total += self.width() / (1.0 - a) * 0.5 * (hi - s) * (hi + s - 2.0 * a);
        }
        Ok(total)
    }

    fn survival_integral(&self, lo: f64, hi: f64) -> Result<f64> {
        let a = self.atom_weight;
        let atom = a * (self.atom_x.clamp(lo, hi) - lo);
        let block = if a < 1.0 {
            (1.0 - a) * uniform_clamp_excess(self.atom_x, self.right_y, lo, hi)
        } else {
            0.0
        };
        Ok(atom + block)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_with_breaks, QuadOptions};

    #[test]
    fn mean_matches_cdf() {
        let d = AtomPlusUniform::new(-1.0, 3.0, 0.3).unwrap();
        // E X = x + ∫_x^y (1 - F)
        let m = -1.0 + integrate(|t| 1.0 - d.cdf(t), -1.0, 3.0).unwrap().value;
        assert!((m - d.mean()).abs() < 1e-12);
        assert!((d.quantile_integral(1e-12, 1.0 - 1e-12).unwrap() - d.mean()).abs() < 1e-10);
    }

    #[test]
    fn exact_integrals_match_quadrature() {
        let d = AtomPlusUniform::new(0.0, 2.0, 0.4).unwrap();
        for (a, b) in [(0.1, 0.3), (0.3, 0.9), (0.05, 0.95)] {
            let q = integrate_with_breaks(|u| d.quantile(u), a, b, &[0.4], QuadOptions::default())
                .unwrap()
                .value;
            assert!((d.quantile_integral(a, b).unwrap() - q).abs() < 1e-10);
        }
        for (a, b) in [(-1.0, 0.5), (0.5, 3.0), (-2.0, 4.0)] {
            let s = integrate(|x| d.survival(x), a, b).unwrap().value;
            assert!((d.survival_integral(a, b).unwrap() - s).abs() < 1e-9);
        }
    }
}
