use std::sync::Arc;

use serde::Serialize;

use super::density::UnimodalDensity;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, kronrod15, QuadOptions};
use crate::roots::{brent, BrentOptions};

const SHORT_WINDOW: f64 = 0.25;
const RECONSTRUCTION_FLOOR: f64 = 1e-7;

/// The pointwise objects of the construction for one density, `n` and a
/// center `c >= 0`.
///
/// With `L = c - t` and `R = c + (n-1) t`,
/// `A(t, y) = ∫_L^R (x - c) (f(x) - y)_+ dx` and `h(t)` is its root in `y`.
#[derive(Debug, Clone)]
pub struct MixKernel {
    f: Arc<dyn UnimodalDensity>,
    n: usize,
    c: f64,
    root_tol: f64,
}

/// `h(t)` together with the right end `K3` of the region where `f > h`
/// inside the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HPoint {
    pub t: f64,
    pub h: f64,
    pub k3: f64,
}

/// Weights of the component law `μ_t`: atoms `K1` at `c - t` and `K2` at
/// `c + (n-1) t`, and uniform mass `K4` on `[c - t, K3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuTComponents {
    pub t: f64,
    pub h: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub q_t: f64,
}

impl MuTComponents {
    /// Width `K3 - (c - t)` of the uniform part.
    pub fn width(&self, c: f64) -> f64 {
        self.k3 - (c - self.t)
    }

    /// `h'(t) = -K4 / (K3 - (c - t))`.
    pub fn h_prime(&self, c: f64) -> f64 {
        let w = self.width(c);
        if w > 0.0 {
            -self.k4 / w
        } else {
            0.0
        }
    }

    /// Probability of the two-point branch, `n K2 / Q_t`.
    pub fn branch_one_weight(&self, n: usize) -> f64 {
        n as f64 * self.k2 / self.q_t
    }

    /// Atom weight of the atom-plus-uniform branch,
    /// `(K1 - (n-1) K2) / (K1 - (n-1) K2 + K4)`, evaluated as `1 - 2t/w`.
    pub fn alpha(&self, c: f64) -> f64 {
        let w = self.width(c);
        if w > 0.0 {
            ((w - 2.0 * self.t) / w).max(0.0)
        } else {
            0.0
        }
    }

    /// `(K1·(c-t) + K2·(c+(n-1)t) + K4·(c-t+K3)/2) / Q_t`.
    pub fn mean(&self, n: usize, c: f64) -> f64 {
        let t = self.t;
        let l = c - t;
        let r = c + (n - 1) as f64 * t;
        // centered at c to avoid cancellation against c itself
        let centered = -self.k1 * t + self.k2 * (r - c) + self.k4 * 0.5 * ((l - c) + (self.k3 - c));
        c + centered / self.q_t
    }
}

impl MixKernel {
    /// Builds the kernel; `c` must be nonnegative and `n >= 3` unless `c = 0`.
    pub fn new(f: Arc<dyn UnimodalDensity>, n: usize, c: f64, root_tol: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!(
                "kernel center must be finite and >= 0, got {c}"
            )));
        }
        if n < 2 || (n == 2 && c != 0.0) {
            return Err(Error::Domain(format!("n = {n} admits only c = 0, got {c}")));
        }
        if !(root_tol > 0.0) {
            return Err(Error::Domain(format!(
                "root_tol must be positive, got {root_tol}"
            )));
        }
        Ok(MixKernel { f, n, c, root_tol })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn density(&self) -> &dyn UnimodalDensity {
        self.f.as_ref()
    }

    fn window(&self, t: f64) -> (f64, f64) {
        (self.c - t, self.c + (self.n - 1) as f64 * t)
    }

    // windows this short are integrated by a fixed rule in coordinates
    // centered at c; the closed forms lose relative accuracy there
    fn is_short(&self, t: f64) -> bool {
        self.n as f64 * t <= SHORT_WINDOW
    }

    // ∫_L^R (x - c) f(x) dx
    fn window_moment(&self, t: f64) -> f64 {
        let (l, r) = self.window(t);
        if self.is_short(t) {
            let c = self.c;
            kronrod15(|s| s * self.f.pdf(c + s), l - c, r - c)
        } else {
            self.f.moment(l, r, self.c)
        }
    }

    /// `A(t, y)` in closed form: moment of `f` over the part of the window
    /// where `f > y`, minus the linear part.
    pub fn eval_a(&self, t: f64, y: f64) -> f64 {
        let (l, r) = self.window(t);
        let ry = self.f.inverse_density(y);
        let lo = l.max(-ry);
        let hi = r.min(ry);
        if hi <= lo {
            return 0.0;
        }
        self.f.moment(lo, hi, self.c) - y * (hi - lo) * ((hi - self.c) + (lo - self.c)) * 0.5
    }

    /// `(∂A/∂t, ∂A/∂y)` at `(t, y)` for `0 <= y <= f(c+t)`.
    pub fn partials(&self, t: f64, y: f64) -> (f64, f64) {
        let (l, r) = self.window(t);
        let u = r.min(self.f.inverse_density(y));
        let n1 = (self.n - 1) as f64;
        let a_t = t * (n1 * n1 * (self.f.pdf(r) - y).max(0.0) - (self.f.pdf(l) - y));
        let a_y = -(u - l) * ((u - self.c) + (l - self.c)) * 0.5;
        (a_t, a_y)
    }

    /// `m(t) = (n-1)² f(c+(n-1)t) - f(c-t)`.
    pub fn eval_m(&self, t: f64) -> f64 {
        let (l, r) = self.window(t);
        let n1 = (self.n - 1) as f64;
        n1 * n1 * self.f.pdf(r) - self.f.pdf(l)
    }

    // A(t, y) with y = f(r) for c + t <= r <= R: the window is [L, r]
    fn a_at_crossing(&self, t: f64, r: f64) -> f64 {
        let c = self.c;
        let l = c - t;
        if self.is_short(t) {
            kronrod15(|s| s * self.f.gap(c + s, r), l - c, r - c)
        } else {
            self.f.moment(l, r, c) - self.f.pdf(r) * (r - l) * ((r - c) + (l - c)) * 0.5
        }
    }

    /// Whether `f(c+(n-1)t) > h(t)`, i.e. the atom `K2` is present.
    pub fn has_upper_atom(&self, t: f64) -> bool {
        self.c > 0.0 && self.upper_atom_indicator(t) < 0.0
    }

    // A(t, f(R)); negative exactly when the root lies below f(R)
    pub fn upper_atom_indicator(&self, t: f64) -> f64 {
        let (_, r) = self.window(t);
        self.a_at_crossing(t, r)
    }

    /// Solves `A(t, h) = 0` for `h in [0, f(c+t)]`.
    pub fn solve(&self, t: f64) -> Result<HPoint> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!(
                "t must be positive and finite, got {t}"
            )));
        }
        let c = self.c;
        if c == 0.0 {
            return Ok(HPoint {
                t,
                h: self.f.pdf(t),
                k3: t,
            });
        }
        let (_, r) = self.window(t);
        let a0 = self.window_moment(t);
        if a0 < -self.root_tol {
            return Err(Error::Invariant(format!(
                "A(t, 0) = {a0:e} < 0 at t = {t}; c = {c} is outside the admissible interval"
            )));
        }
        if a0 <= 0.0 {
            return Ok(HPoint { t, h: 0.0, k3: r });
        }
        let nf = self.n as f64;
        if self.a_at_crossing(t, r) < 0.0 {
            // f > h on the whole window, so A is affine in y
            let h = 2.0 * a0 / (nf * (nf - 2.0) * t * t);
            return Ok(HPoint { t, h, k3: r });
        }
        let lo = c + t;
        let opts = BrentOptions {
            xtol: 1e-300,
            max_iter: 300,
        };
        let k3 = brent(|x| self.a_at_crossing(t, x), lo, r, opts)?;
        Ok(HPoint {
            t,
            h: self.f.pdf(k3),
            k3,
        })
    }

    /// `h(t)`.
    pub fn solve_h(&self, t: f64) -> Result<f64> {
        self.solve(t).map(|p| p.h)
    }

    /// Component weights at `t`, with the inequalities of the construction
    /// checked.
    pub fn components(&self, t: f64) -> Result<MuTComponents> {
        let p = self.solve(t)?;
        self.components_at(p)
    }

    pub(crate) fn components_at(&self, p: HPoint) -> Result<MuTComponents> {
        let HPoint { t, h, k3 } = p;
        let c = self.c;
        if c == 0.0 {
            let k4 = -2.0 * t * self.f.dpdf(t);
            if !(k4 > 0.0) {
                return Err(Error::Invariant(format!(
                    "K4 > 0 fails at t = {t}: K4 = {k4:e}"
                )));
            }
            return Ok(MuTComponents {
                t,
                h,
                k1: 0.0,
                k2: 0.0,
                k3,
                k4,
                q_t: k4,
            });
        }
        let (l, r) = self.window(t);
        let n1 = (self.n - 1) as f64;
        let (k1, k2) = if k3 < r {
            (self.f.gap(l, k3), 0.0)
        } else {
            (self.f.pdf(l) - h, n1 * (self.f.pdf(r) - h).max(0.0))
        };
        if !(k1 > 0.0) {
            return Err(Error::Invariant(format!(
                "K1 > 0 fails at t = {t}: K1 = {k1:e}"
            )));
        }
        if !(k3 >= c + t) {
            return Err(Error::Invariant(format!(
                "K3 >= c + t fails at t = {t}: K3 = {k3}"
            )));
        }
        let mut excess = k1 - n1 * k2;
        if excess < 0.0 {
            if excess < -1e-10 * k1 {
                return Err(Error::Invariant(format!(
                    "K1 >= (n-1) K2 fails at t = {t}: K1 = {k1:e}, K2 = {k2:e}"
                )));
            }
            excess = 0.0;
        }
        let gap = k3 - (c + t);
        let k4 = if excess == 0.0 {
            0.0
        } else if gap > 0.0 {
            2.0 * t * excess / gap
        } else {
            return Err(Error::Invariant(format!(
                "K3 = c + t with K1 > (n-1) K2 at t = {t}; K4 is unbounded"
            )));
        };
        Ok(MuTComponents {
            t,
            h,
            k1,
            k2,
            k3,
            k4,
            q_t: k1 + k2 + k4,
        })
    }

    /// `Q((0, t]) = ∫_{c-t}^{K3} (f - h(t))`.
    pub fn q_cdf(&self, t: f64) -> Result<f64> {
        let p = self.solve(t)?;
        Ok(self.q_cdf_at(p))
    }

    pub(crate) fn q_cdf_at(&self, p: HPoint) -> f64 {
        let l = self.c - p.t;
        (self.f.mass(l, p.k3) - p.h * (p.k3 - l)).max(0.0)
    }

    /// `ν_t((-∞, y]) = ∫_{c-t}^{min(y, K3)} (f - h(t))`.
    pub fn nu(&self, t: f64, y: f64) -> Result<f64> {
        let p = self.solve(t)?;
        let l = self.c - t;
        let hi = y.min(p.k3);
        if hi <= l {
            return Ok(0.0);
        }
        Ok(self.f.mass(l, hi) - p.h * (hi - l))
    }

    /// `∫_0^t Q_s μ_s((-∞, y]) ds` by adaptive quadrature; compare with
    /// [`MixKernel::nu`]. The range below `1e-7` is skipped; its total
    /// weight is `Q((0, 1e-7])`, of order `1e-14`.
    pub fn nu_reconstructed(&self, t: f64, y: f64) -> Result<f64> {
        let c = self.c;
        let n1 = (self.n - 1) as f64;
        let integrand = |s: f64| -> f64 {
            if s <= 0.0 {
                return 0.0;
            }
            let Ok(k) = self.components(s) else {
                return f64::NAN;
            };
            let l = c - s;
            let mut v = 0.0;
            if l <= y {
                v += k.k1;
            }
            if c + n1 * s <= y {
                v += k.k2;
            }
            let w = k.k3 - l;
            if w > 0.0 {
                v += k.k4 * ((y - l) / w).clamp(0.0, 1.0);
            }
            v
        };
        let mut breaks = vec![c - y, (y - c) / n1];
        let s0 = RECONSTRUCTION_FLOOR.min(0.5 * t);
        let mut s = t;
        while s > s0 {
            breaks.push(s);
            s *= 0.5;
        }
        let opts = QuadOptions {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_intervals: 20_000,
        };
        Ok(integrate_with_breaks(integrand, s0, t, &breaks, opts)?.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cauchy_mix::density::StdCauchy;
    use crate::quadrature::integrate;
    use std::f64::consts::PI;

    fn kernel(n: usize, c: f64) -> MixKernel {
        MixKernel::new(Arc::new(StdCauchy), n, c, 1e-12).unwrap()
    }

    fn a_by_quadrature(k: &MixKernel, t: f64, y: f64) -> f64 {
        let c = k.c();
        let (l, r) = (c - t, c + (k.n() - 1) as f64 * t);
        let f = StdCauchy;
        let ry = f.inverse_density(y);
        let breaks = [-ry, ry];
        integrate_with_breaks(
            |x| (x - c) * (f.pdf(x) - y).max(0.0),
            l,
            r,
            &breaks,
            QuadOptions::default(),
        )
        .unwrap()
        .value
    }

    #[test]
    fn a_matches_quadrature() {
        let k = kernel(3, 0.15);
        for t in [0.05, 0.7, 3.0, 40.0] {
            let f0 = StdCauchy.pdf(0.15 + t);
            for y in [-0.2, 0.0, 0.3 * f0, 0.9 * f0, f0] {
                let a = k.eval_a(t, y);
                let q = a_by_quadrature(&k, t, y);
                assert!(
                    (a - q).abs() < 1e-10 * (1.0 + q.abs()),
                    "t={t} y={y}: {a} vs {q}"
                );
            }
        }
    }

    #[test]
    fn a_examples() {
        let c = 0.1;
        let k = kernel(3, c);
        let f = StdCauchy;
        for t in [0.1, 1.0, 5.0] {
            // at y = f(c+t) only the symmetric window [c-t, c+t] survives
            let a = k.eval_a(t, f.pdf(c + t));
            let sym = integrate(|x| x * f.pdf(c + x) - x * f.pdf(c + t), -t, t)
                .unwrap()
                .value;
            assert!(a < 0.0);
            assert!((a - sym).abs() < 1e-12);
        }
        assert!(k.eval_a(1.0, -1e3) > 100.0);
        let limit = 2f64.ln() / PI - c;
        assert!((k.eval_a(1e7, 0.0) - limit).abs() < 1e-8);
    }

    #[test]
    fn solve_h_is_a_root_in_range() {
        for &(n, c) in &[
            (3, 0.1),
            (3, 0.15),
            (3, 2f64.ln() / PI),
            (5, 0.3),
            (10, 0.6),
        ] {
            let k = kernel(n, c);
            let mut t = 1e-5;
            while t < 1e5 {
                let p = k.solve(t).unwrap();
                assert!(
                    p.h >= 0.0 && p.h <= StdCauchy.pdf(c + t) * (1.0 + 1e-15),
                    "n={n} c={c} t={t}"
                );
                assert!(
                    k.eval_a(t, p.h).abs() <= 1e-12,
                    "n={n} c={c} t={t}: {}",
                    k.eval_a(t, p.h)
                );
                t *= 1.7;
            }
        }
    }

    #[test]
    fn h_examples() {
        let k = kernel(3, 0.1);
        let t = 1e-3;
        let h = k.solve_h(t).unwrap();
        let top = StdCauchy.pdf(0.1 + t);
        assert!(h < top && top - h < 1e-4);
        let k = kernel(3, 2f64.ln() / PI);
        assert!(k.solve_h(1e6).unwrap() < 1e-12);
        assert!(k.solve_h(1e3).unwrap() < k.solve_h(10.0).unwrap());
    }

    #[test]
    fn implicit_derivative_matches_finite_difference() {
        for &(n, c) in &[(3, 0.1), (3, 0.15), (5, 0.2)] {
            let k = kernel(n, c);
            for t in [0.01, 0.5, 2.0, 10.0] {
                let comp = k.components(t).unwrap();
                let (a_t, a_y) = k.partials(t, comp.h);
                let analytic = -a_t / a_y;
                let d = 1e-6 * t;
                let fd = (k.solve_h(t + d).unwrap() - k.solve_h(t - d).unwrap()) / (2.0 * d);
                assert!(
                    (analytic - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                    "t={t}: {analytic} vs {fd}"
                );
                assert!((comp.h_prime(c) - analytic).abs() < 1e-9 * (1.0 + analytic.abs()));
            }
        }
    }

    #[test]
    fn component_invariants_and_mean() {
        for &(n, c) in &[
            (3, 0.1),
            (3, 0.15),
            (3, 2f64.ln() / PI),
            (4, 0.2),
            (10, 0.6),
        ] {
            let k = kernel(n, c);
            let mut t = 1e-4;
            while t < 1e4 {
                let m = k.components(t).unwrap();
                assert_eq!(m.q_t, m.k1 + m.k2 + m.k4);
                assert!(m.k1 > 0.0 && m.k2 >= 0.0 && m.k4 >= 0.0 && m.k3 >= c + t);
                if m.k4 > 0.0 {
                    assert!(m.k1 >= (n - 1) as f64 * m.k2);
                }
                if StdCauchy.pdf(c + (n - 1) as f64 * t) <= m.h {
                    assert_eq!(m.k2, 0.0);
                }
                assert!((m.mean(n, c) - c).abs() < 1e-8, "n={n} c={c} t={t}");
                let a = m.alpha(c);
                let nf = n as f64;
                assert!((0.0..=1.0 - 2.0 / nf + 1e-12).contains(&a));
                assert!(nf * t >= m.width(c) * (1.0 - 1e-12));
                let ex = m.k1 - (nf - 1.0) * m.k2;
                if ex + m.k4 > 0.0 {
                    assert!((a - ex / (ex + m.k4)).abs() < 1e-8);
                }
                t *= 2.3;
            }
        }
    }

    #[test]
    fn zero_center_is_the_uniform_mixture() {
        let k = kernel(3, 0.0);
        let m = k.components(2.0).unwrap();
        assert_eq!((m.k1, m.k2, m.k3), (0.0, 0.0, 2.0));
        assert!((m.q_t - 4.0 * 2.0 * 2.0 / (PI * 25.0)).abs() < 1e-15);
        assert_eq!(m.alpha(0.0), 0.0);
    }

    #[test]
    fn q_cdf_derivative_is_q_t() {
        for &c in &[0.0, 0.1, 0.15] {
            let k = kernel(3, c);
            for t in [0.3, 2.0, 20.0] {
                let d = 1e-5 * t;
                let fd = (k.q_cdf(t + d).unwrap() - k.q_cdf(t - d).unwrap()) / (2.0 * d);
                let q = k.components(t).unwrap().q_t;
                assert!(
                    (fd - q).abs() < 1e-6 * (1.0 + q),
                    "c={c} t={t}: {fd} vs {q}"
                );
            }
        }
    }

    #[test]
    fn reconstruction_of_nu() {
        let k = kernel(3, 0.15);
        for (t, y) in [(1.0, 0.0), (5.0, 2.0), (20.0, -3.0)] {
            let lhs = k.nu_reconstructed(t, y).unwrap();
            let rhs = k.nu(t, y).unwrap();
            assert!((lhs - rhs).abs() < 1e-4, "t={t} y={y}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn m_changes_sign_once() {
        let k = kernel(3, 0.15);
        let mut signs = Vec::new();
        let mut t = 1e-4;
        while t < 1e4 {
            signs.push(k.eval_m(t) >= 0.0);
            t *= 1.1;
        }
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert!(changes <= 1);
        assert!(signs[0]);
    }
}
