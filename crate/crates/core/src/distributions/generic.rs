use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::{Distribution, MeanStatus};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::roots::{brent, BrentOptions};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const SHAPE_GRID: usize = 2001;
const SHAPE_HALF_WIDTH: f64 = 50.0;

/// Symmetric, strictly unimodal density given by closures for `g` and `g'`.
///
/// The cdf is `1/2 + ∫_0^x g` for `x >= 0` (reflected for `x < 0`), where the
/// integral runs in `u = x/(1+x)` coordinates so the whole half-line maps
/// to [0,1). Cumulative masses at fixed `u`-knots are computed once.
#[derive(Clone)]
pub struct GenericDensity {
    g: RealFn,
    dg: RealFn,
    mean: MeanStatus,
    label: String,
    knots: Vec<f64>,
    cum: Vec<f64>,
    mom: Vec<f64>,
    half_mass: f64,
}

impl fmt::Debug for GenericDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericDensity")
            .field("label", &self.label)
            .field("mean", &self.mean)
            .finish()
    }
}

fn quad_opts(moment: bool) -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-13,
        rel_tol: if moment { 1e-10 } else { 1e-12 },
        max_intervals: 20_000,
    }
}

impl GenericDensity {
    /// Checks symmetry (within 1e-12) and the sign of `g'` on a grid over
    /// [-50, 50], then tabulates the cdf.
    pub fn new<G, D>(label: impl Into<String>, g: G, dg: D, mean: MeanStatus) -> Result<Self>
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let label = label.into();
        for i in 1..SHAPE_GRID {
            let x = SHAPE_HALF_WIDTH * i as f64 / (SHAPE_GRID - 1) as f64;
            let (gp, gm) = (g(x), g(-x));
            if !(gp >= 0.0) || (gp - gm).abs() > 1e-12 {
                return domain(format!("{label}: density not symmetric at x = {x}"));
            }
            if !(dg(x) < 0.0 && dg(-x) > 0.0) {
                return domain(format!("{label}: density not strictly unimodal at x = {x}"));
            }
        }
        let g: RealFn = Arc::new(g);
        let dg: RealFn = Arc::new(dg);

        // u-knots: uniform on [0, 0.9], then geometric toward 1
        let mut knots: Vec<f64> = (0..=18).map(|i| i as f64 * 0.05).collect();
        let mut gap = 0.1;
        while gap > 1e-12 {
            gap *= 0.25;
            knots.push(1.0 - gap);
        }
        let mut cum = vec![0.0];
        let mut mom = vec![0.0];
        for w in knots.windows(2) {
            let piece = u_integral(&g, w[0], w[1], false)?;
            cum.push(cum.last().unwrap() + piece);
            let piece = u_integral(&g, w[0], w[1], true)?;
            mom.push(mom.last().unwrap() + piece);
        }
        let tail = u_integral(&g, *knots.last().unwrap(), 1.0, false)?;
        let half_mass = cum.last().unwrap() + tail;
        if (2.0 * half_mass - 1.0).abs() > 1e-8 {
            return Err(Error::Calibration(format!(
                "{label}: density integrates to {}, not 1",
                2.0 * half_mass
            )));
        }
        Ok(GenericDensity {
            g,
            dg,
            mean,
            label,
            knots,
            cum,
            mom,
            half_mass,
        })
    }

    /// `β/(1+|x|^a)` for `a > 1`, with `β` normalizing the total mass.
    /// `a = 2` is the standard Cauchy density.
    pub fn power_law(a: f64) -> Result<Self> {
        if !(a > 1.0 && a.is_finite()) {
            return domain(format!("power-law exponent must exceed 1, got {a}"));
        }
        // ∫_0^∞ 1/(1+x^a) dx = (π/a)/sin(π/a)
        let beta = 1.0 / (2.0 * (PI / a) / (PI / a).sin());
        let mean = if a > 2.0 {
            MeanStatus::Finite(0.0)
        } else {
            MeanStatus::Undefined
        };
        GenericDensity::new(
            format!("power_law({a})"),
            move |x: f64| beta / (1.0 + x.abs().powf(a)),
            move |x: f64| {
                let ax = x.abs();
                let p = ax.powf(a);
                let d = -beta * a * ax.powf(a - 1.0) / ((1.0 + p) * (1.0 + p));
                if x < 0.0 {
                    -d
                } else {
                    d
                }
            },
            mean,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pdf(&self, x: f64) -> f64 {
        (self.g)(x)
    }

    pub fn dpdf(&self, x: f64) -> f64 {
        (self.dg)(x)
    }

    /// `∫_0^x g` for `x >= 0`.
    fn half_cdf(&self, x: f64) -> f64 {
        if x == f64::INFINITY {
            return self.half_mass;
        }
        let u = x / (1.0 + x);
        let k = self.knots.partition_point(|&kn| kn <= u) - 1;
        let rest = u_integral(&self.g, self.knots[k], u, false).unwrap_or(0.0);
        self.cum[k] + rest
    }

    /// `∫_0^x s g(s) ds` for `x >= 0`.
    pub(crate) fn half_moment(&self, x: f64) -> f64 {
        let u = x / (1.0 + x);
        let k = self.knots.partition_point(|&kn| kn <= u) - 1;
        let rest = u_integral(&self.g, self.knots[k], u, true).unwrap_or(0.0);
        self.mom[k] + rest
    }

    /// Positive solution of `g(x) = y`; `+∞` for `y <= 0`, 0 at or above
    /// the mode.
    pub fn inverse_density(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return f64::INFINITY;
        }
        if y >= self.pdf(0.0) {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.pdf(hi) > y {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        let opts = BrentOptions {
            xtol: 1e-15 * hi,
            max_iter: 300,
        };
        brent(|x| self.pdf(x) - y, 0.0, hi, opts).unwrap_or(hi)
    }
}

/// `∫_{u0}^{u1} w(x) g(x) dx/du du` with `x = u/(1-u)`, where `w(x) = x`
/// when `moment` is set and 1 otherwise.
fn u_integral(g: &RealFn, u0: f64, u1: f64, moment: bool) -> Result<f64> {
    if u1 <= u0 {
        return Ok(0.0);
    }
    let f = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let v = 1.0 - u;
        let x = u / v;
        let w = if moment { x } else { 1.0 };
        w * g(x) / (v * v)
    };
    Ok(integrate_with_breaks(f, u0, u1, &[], quad_opts(moment))?.value)
}

impl Distribution for GenericDensity {
    fn cdf(&self, x: f64) -> f64 {
        if x >= 0.0 {
            0.5 + self.half_cdf(x)
        } else {
            0.5 - self.half_cdf(-x)
        }
    }

    fn survival(&self, x: f64) -> f64 {
        self.cdf(-x)
    }

    fn quantile(&self, u: f64) -> f64 {
        if u == 0.5 {
            return 0.0;
        }
        let (target, sign) = if u > 0.5 {
            (u - 0.5, 1.0)
        } else {
            (0.5 - u, -1.0)
        };
        let mut hi = 1.0;
        while self.half_cdf(hi) < target && hi < 1e300 {
            hi *= 4.0;
        }
        let opts = BrentOptions {
            xtol: 1e-15 * hi,
            max_iter: 300,
        };
        let x = brent(|x| self.half_cdf(x) - target, 0.0, hi, opts).unwrap_or(hi);
        sign * x
    }

    fn density(&self, x: f64) -> Option<f64> {
        Some(self.pdf(x))
    }

    fn mean_status(&self) -> MeanStatus {
        self.mean
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Cauchy;

    #[test]
    fn power_law_two_is_cauchy() {
        let g = GenericDensity::power_law(2.0).unwrap();
        let c = Cauchy::standard();
        for x in [-200.0, -3.0, -0.4, 0.0, 0.7, 5.0, 1e4] {
            assert!((g.cdf(x) - c.cdf(x)).abs() < 1e-11, "{x}");
            assert!((g.pdf(x) - c.density(x).unwrap()).abs() < 1e-15);
        }
        for u in [0.01, 0.3, 0.5, 0.9, 0.999] {
            assert!((g.quantile(u) - c.quantile(u)).abs() < 1e-8 * (1.0 + c.quantile(u).abs()));
        }
    }

    #[test]
    fn moment_and_inverse_match_cauchy() {
        let g = GenericDensity::power_law(2.0).unwrap();
        for x in [0.0f64, 0.3, 2.0, 50.0, 1e4] {
            let exact = (x * x).ln_1p() / (2.0 * PI);
            assert!(
                (g.half_moment(x) - exact).abs() < 1e-10 * (1.0 + exact),
                "{x}"
            );
        }
        for y in [0.3, 0.1, 1e-3, 1e-7] {
            let exact = crate::distributions::cauchy_inverse_density(y).unwrap();
            assert!(
                (g.inverse_density(y) - exact).abs() < 1e-9 * (1.0 + exact),
                "{y}"
            );
        }
        assert_eq!(g.inverse_density(0.0), f64::INFINITY);
        assert_eq!(g.inverse_density(1.0), 0.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let g = GenericDensity::power_law(1.5).unwrap();
        for x in [-4.0, -0.5, 0.3, 2.0] {
            let h = 1e-6;
            let fd = (g.pdf(x + h) - g.pdf(x - h)) / (2.0 * h);
            assert!((fd - g.dpdf(x)).abs() < 1e-7, "{x}");
        }
    }

    #[test]
    fn rejects_asymmetric_or_bimodal() {
        let asym = GenericDensity::new(
            "asym",
            |x| (-(x - 0.1_f64).powi(2)).exp(),
            |x| -2.0 * (x - 0.1) * (-(x - 0.1_f64).powi(2)).exp(),
            MeanStatus::Finite(0.1),
        );
        assert!(asym.is_err());
        let flat = GenericDensity::new("flat", |_| 0.01, |_| 0.0, MeanStatus::Finite(0.0));
        assert!(flat.is_err());
    }

    #[test]
    fn rejects_unnormalized() {
        let r = GenericDensity::new(
            "twice cauchy",
            |x| 2.0 / (PI * (1.0 + x * x)),
            |x| -4.0 * x / (PI * (1.0 + x * x).powi(2)),
            MeanStatus::Undefined,
        );
        assert!(matches!(r, Err(Error::Calibration(_))));
    }
}
