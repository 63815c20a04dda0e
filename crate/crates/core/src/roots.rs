//! Bracketing root finder (Brent–Dekker).

use crate::error::{Error, Result};

/// Termination for [`brent`]: stop once the bracket is narrower than
/// `xtol + 4 ε |x|` or the function value is exactly zero.
#[derive(Debug, Clone, Copy)]
pub struct BrentOptions {
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for BrentOptions {
    fn default() -> Self {
        BrentOptions {
            xtol: 0.0,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[a, b]` given `f(a)` and `f(b)` of opposite sign
/// (or one of them zero).
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: BrentOptions) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Root(format!(
            "no sign change on [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::Root(format!(
        "no convergence after {} iterations (bracket [{b}, {c}])",
        opts.max_iter
    )))
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`; stops when the
/// bracket is narrower than `tol`. Returns `(argmin, min)` over every
/// evaluated point, endpoints included.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut best = (a, f(a));
    let fb = f(b);
    if fb < best.1 {
        best = (b, fb);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section_min(|x| (x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn golden_reports_endpoint_minimum() {
        let (x, _) = golden_section_min(|x| x, 1.0, 5.0, 1e-9);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn sqrt_two() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, BrentOptions::default()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn root_at_endpoint() {
        let r = brent(|x| x - 1.0, 1.0, 3.0, BrentOptions::default()).unwrap();
        assert_eq!(r, 1.0);
    }

    #[test]
    fn rejects_same_sign() {
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, BrentOptions::default()).is_err());
    }

    #[test]
    fn tiny_scale_root() {
        // Root at 1e-30; absolute tolerance must not swallow it.
        let r = brent(|x| x - 1e-30, 0.0, 1.0, BrentOptions::default()).unwrap();
        assert!((r - 1e-30).abs() < 1e-44);
    }
}
