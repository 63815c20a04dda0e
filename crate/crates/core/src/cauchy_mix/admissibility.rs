use serde::Serialize;

use crate::distributions::GenericDensity;
use crate::error::{domain, Result};

const GRID_HALF_WIDTH: f64 = 50.0;
const GRID_STEP: f64 = 0.05;
const CONVEXITY_TOL: f64 = 1e-9;
const TAIL_T_LO: f64 = 1e4;
const TAIL_T_HI: f64 = 1e6;
const TAIL_POINTS: usize = 41;

/// Outcome of [`generic_admissibility`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    /// `√(1/g)` passed the convexity check.
    pub ok: bool,
    /// Estimate of `liminf_t ∫_t^{(n-1)t} x g(x) dx`, the largest usable `|c|`.
    pub q_max: f64,
    /// Grid point of the most negative second difference when the check fails.
    pub witness: Option<f64>,
    /// Most negative scaled second difference seen on the grid.
    pub min_second_difference: f64,
}

/// Checks whether the mixer pipeline applies to `g`.
///
/// Convexity of `√(1/g)` is tested by second differences with step 0.05 on
/// `[-50, 50]`; the bound on `|c|` is the minimum of the tail integral over a
/// geometric sequence of `t` in `[1e4, 1e6]`.
pub fn generic_admissibility(g: &GenericDensity, n: usize) -> Result<Admissibility> {
    if n < 2 {
        return domain(format!("n must be at least 2, got {n}"));
    }
    let s = |x: f64| (1.0 / g.pdf(x)).sqrt();
    let steps = (2.0 * GRID_HALF_WIDTH / GRID_STEP).round() as usize;
    let mut worst = f64::INFINITY;
    let mut worst_x = 0.0;
    for i in 1..steps {
        let x = -GRID_HALF_WIDTH + GRID_STEP * i as f64;
        let d2 = (s(x + GRID_STEP) - 2.0 * s(x) + s(x - GRID_STEP)) / (GRID_STEP * GRID_STEP);
        if d2 < worst {
            worst = d2;
            worst_x = x;
        }
    }
    let ok = worst >= -CONVEXITY_TOL;

    let ratio = (TAIL_T_HI / TAIL_T_LO).ln() / (TAIL_POINTS - 1) as f64;
    let q_max = (0..TAIL_POINTS)
        .map(|i| {
            let t = TAIL_T_LO * (ratio * i as f64).exp();
            g.half_moment((n - 1) as f64 * t) - g.half_moment(t)
        })
        .fold(f64::INFINITY, f64::min)
        .max(0.0);

    Ok(Admissibility {
        ok,
        q_max,
        witness: (!ok).then_some(worst_x),
        min_second_difference: worst,
    })
}
