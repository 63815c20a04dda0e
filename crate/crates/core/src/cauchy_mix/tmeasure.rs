use serde::Serialize;

use super::kernel::{MixKernel, MuTComponents};
use crate::error::{Error, Result};
use crate::roots::{brent, BrentOptions};

/// Smallest knot of the `t`-grid.
pub const T_MIN: f64 = 1e-6;

const T_START: f64 = 1024.0;
const T_CEILING: f64 = 1e18;

/// The mixing measure `Q` on a log-spaced `t`-grid.
///
/// `cdf[j] = Q((0, t_j])` is evaluated in closed form at every knot. The
/// sampler renormalizes by `total_mass = Q((0, t_max])`; the trapezoid
/// integral of `Q_t` is kept as an independent check.
#[derive(Debug, Clone, Serialize)]
pub struct TMeasure {
    knots: Vec<f64>,
    cdf: Vec<f64>,
    total_mass: f64,
    trapezoid_mass: f64,
    kink_knots: Vec<f64>,
}

/// Knots, component data and the measure built from them.
#[derive(Debug, Clone)]
pub struct TGrid {
    pub components: Vec<MuTComponents>,
    pub measure: TMeasure,
}

impl TMeasure {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Raw `Q((0, t_j])` at the knots.
    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// `1 - total_mass`, the mass beyond `t_max` dropped by renormalization.
    pub fn mass_deficit(&self) -> f64 {
        1.0 - self.total_mass
    }

    pub fn trapezoid_mass(&self) -> f64 {
        self.trapezoid_mass
    }

    /// Factor applied to the raw cdf so that it ends at 1.
    pub fn normalization(&self) -> f64 {
        1.0 / self.total_mass
    }

    pub fn t_max(&self) -> f64 {
        *self.knots.last().expect("grid is non-empty")
    }

    /// Knots inserted where the atom at `c + (n-1)t` appears or vanishes.
    pub fn kink_knots(&self) -> &[f64] {
        &self.kink_knots
    }

    /// Normalized cdf, linear between knots and from 0 below the first.
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.t_max() {
            return 1.0;
        }
        let j = self.knots.partition_point(|&k| k <= t);
        let raw = if j == 0 {
            self.cdf[0] * t / self.knots[0]
        } else {
            let (t0, t1) = (self.knots[j - 1], self.knots[j]);
            let (c0, c1) = (self.cdf[j - 1], self.cdf[j]);
            c0 + (c1 - c0) * (t - t0) / (t1 - t0)
        };
        raw / self.total_mass
    }

    /// Inverse of [`TMeasure::cdf`] at `u in (0, 1)`.
    pub fn inverse(&self, u: f64) -> f64 {
        let target = u.clamp(0.0, 1.0) * self.total_mass;
        if target <= self.cdf[0] {
            return self.knots[0] * target / self.cdf[0];
        }
        let j = self
            .cdf
            .partition_point(|&v| v < target)
            .min(self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[j - 1], self.cdf[j]);
        let (t0, t1) = (self.knots[j - 1], self.knots[j]);
        if c1 <= c0 {
            return t0;
        }
        t0 + (t1 - t0) * (target - c0) / (c1 - c0)
    }
}

/// Chooses `t_max` by doubling until `Q((0, t_max]) >= 1 - tail_eps`, lays
/// `points` log-spaced knots on `[T_MIN, t_max]`, inserts a knot at every
/// switch of the upper atom, and tabulates components and `Q`.
pub fn build_t_grid(kernel: &MixKernel, points: usize, tail_eps: f64) -> Result<TGrid> {
    if points < 16 {
        return Err(Error::Domain(format!(
            "t-grid needs at least 16 points, got {points}"
        )));
    }
    if !(tail_eps > 0.0 && tail_eps < 0.5) {
        return Err(Error::Domain(format!(
            "tail_eps must lie in (0, 0.5), got {tail_eps}"
        )));
    }
    let mut t_max = T_START;
    while 1.0 - kernel.q_cdf(t_max)? > tail_eps {
        t_max *= 2.0;
        if t_max > T_CEILING {
            return Err(Error::Calibration(format!(
                "Q mass beyond t = {T_CEILING:e} still exceeds tail_eps = {tail_eps:e}"
            )));
        }
    }
    let ratio = (t_max / T_MIN).ln() / (points - 1) as f64;
    let mut knots: Vec<f64> = (0..points)
        .map(|i| T_MIN * (ratio * i as f64).exp())
        .collect();
    knots[points - 1] = t_max;

    let mut kinks = Vec::new();
    if kernel.c() > 0.0 {
        let ind: Vec<f64> = knots
            .iter()
            .map(|&t| kernel.upper_atom_indicator(t))
            .collect();
        for j in 0..points - 1 {
            if (ind[j] < 0.0) != (ind[j + 1] < 0.0) {
                let opts = BrentOptions {
                    xtol: 1e-14 * knots[j + 1],
                    max_iter: 200,
                };
                let t = brent(
                    |t| kernel.upper_atom_indicator(t),
                    knots[j],
                    knots[j + 1],
                    opts,
                )?;
                if t > knots[j] && t < knots[j + 1] {
                    kinks.push(t);
                }
            }
        }
        knots.extend_from_slice(&kinks);
        knots.sort_by(f64::total_cmp);
    }

    let mut components = Vec::with_capacity(knots.len());
    let mut cdf = Vec::with_capacity(knots.len());
    for &t in &knots {
        let p = kernel.solve(t)?;
        components.push(kernel.components_at(p)?);
        cdf.push(kernel.q_cdf_at(p));
    }
    for j in 1..cdf.len() {
        if cdf[j] < cdf[j - 1] {
            let drop = cdf[j - 1] - cdf[j];
            if drop > 1e-13 * cdf[j - 1].max(1e-300) + 1e-18 {
                return Err(Error::Calibration(format!(
                    "Q cdf decreases by {drop:e} at t = {}",
                    knots[j]
                )));
            }
            cdf[j] = cdf[j - 1];
        }
    }
    let total_mass = *cdf.last().expect("grid is non-empty");
    let mut trapezoid_mass = 0.5 * components[0].q_t * knots[0];
    for j in 1..knots.len() {
        trapezoid_mass +=
            0.5 * (components[j].q_t + components[j - 1].q_t) * (knots[j] - knots[j - 1]);
    }
    if (total_mass - 1.0).abs() > tail_eps + 1e-3 {
        return Err(Error::Calibration(format!(
            "Q mass {total_mass} deviates from 1 by more than tail_eps + 1e-3"
        )));
    }
    if (trapezoid_mass - total_mass).abs() > 1e-3 {
        return Err(Error::Calibration(format!(
            "trapezoid Q mass {trapezoid_mass} disagrees with closed form {total_mass}"
        )));
    }
    Ok(TGrid {
        components,
        measure: TMeasure {
            knots,
            cdf,
            total_mass,
            trapezoid_mass,
            kink_knots: kinks,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cauchy_mix::density::StdCauchy;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn grid(n: usize, c: f64) -> TGrid {
        let k = MixKernel::new(Arc::new(StdCauchy), n, c, 1e-12).unwrap();
        build_t_grid(&k, 2048, 1e-4).unwrap()
    }

    #[test]
    fn mass_and_shape() {
        for &c in &[0.0, 0.1, 0.15, 2f64.ln() / PI] {
            let g = grid(3, c);
            let q = &g.measure;
            assert!((q.total_mass() - 1.0).abs() <= 1e-4 + 1e-6, "c={c}");
            assert!(q.mass_deficit() >= 0.0);
            assert!(
                (q.trapezoid_mass() - q.total_mass()).abs() < 1e-4,
                "c={c} {} {}",
                q.trapezoid_mass(),
                q.total_mass()
            );
            assert!(q.cdf_values().windows(2).all(|w| w[1] >= w[0]));
            assert!(q.cdf(T_MIN) < 1e-9);
            assert_eq!(q.cdf(q.t_max()), 1.0);
        }
    }

    #[test]
    fn kink_knot_is_inserted_where_the_upper_atom_appears() {
        let g = grid(3, 0.15);
        let kinks = g.measure.kink_knots();
        assert_eq!(kinks.len(), 1);
        assert!(kinks[0] > 1.0 && kinks[0] < 20.0, "{kinks:?}");
        assert!(grid(3, 0.1).measure.kink_knots().is_empty());
    }

    #[test]
    fn inverse_inverts_cdf() {
        let g = grid(3, 0.15);
        let q = &g.measure;
        for u in [1e-9, 1e-4, 0.1, 0.5, 0.9, 0.9999] {
            let t = q.inverse(u);
            assert!((q.cdf(t) - u).abs() < 1e-12, "u={u}");
        }
    }

    #[test]
    fn zero_center_mass_is_closed_form() {
        let g = grid(3, 0.0);
        let t = g.measure.t_max();
        let exact = 2.0 / PI * t.atan() - 2.0 * t / (PI * (1.0 + t * t));
        assert!((g.measure.total_mass() - exact).abs() < 1e-14);
    }
}
