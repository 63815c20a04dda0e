use mixcenter::center_bounds::{
    cauchy_center_interval, cm_bounds, dual_bound, jm_center_bounds, JmBoundsInput,
};
use mixcenter::Distribution;
use serde::Serialize;

use super::{load_marginal, load_marginals};
use crate::args::{BoundsArgs, DualArgs};
use crate::error::{CliError, CliResult};
use crate::output::Output;

#[derive(Debug, Serialize)]
struct BoundsResult {
    lo: f64,
    hi: f64,
    method: &'static str,
    grid_resolution: Option<f64>,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    betas: Option<Vec<f64>>,
}

pub fn interval(n: usize) -> CliResult<Output> {
    let iv = cauchy_center_interval(n)?;
    Ok(Output::new(BoundsResult {
        lo: iv.lo,
        hi: iv.hi,
        method: "exact_formula",
        grid_resolution: None,
        n,
        alpha_lo: None,
        alpha_hi: None,
        betas: None,
    }))
}

pub fn bounds(args: &BoundsArgs) -> CliResult<Output> {
    if let Some(path) = &args.marginals {
        let laws = load_marginals(path)?;
        let n = laws.len();
        if args.n.is_some_and(|k| k != n) {
            return Err(CliError::Usage(format!(
                "--n {} does not match {n} marginals",
                args.n.unwrap_or(0)
            )));
        }
        let beta = args.beta.unwrap_or(0.01 / n as f64);
        let betas = vec![beta; n];
        let input = JmBoundsInput {
            marginals: laws.iter().map(|b| &**b as &dyn Distribution).collect(),
            betas: betas.clone(),
        };
        let (lo, hi) = jm_center_bounds(&input)?;
        return Ok(Output::new(BoundsResult {
            lo,
            hi,
            method: "joint_window_bounds",
            grid_resolution: None,
            n,
            alpha_lo: None,
            alpha_hi: None,
            betas: Some(betas),
        }));
    }
    let n = args
        .n
        .ok_or_else(|| CliError::Usage("--n is required unless --marginals is given".into()))?;
    let (_, law) = load_marginal(args.marginal.as_deref())?;
    let b = cm_bounds(&*law, n)?;
    Ok(Output::new(BoundsResult {
        lo: b.a_star,
        hi: b.b_star,
        method: "complete_window_bounds",
        grid_resolution: Some(b.grid_resolution),
        n,
        alpha_lo: Some(b.alpha_a),
        alpha_hi: Some(b.alpha_b),
        betas: None,
    }))
}

#[derive(Debug, Serialize)]
struct DualResult {
    n: usize,
    c: f64,
    value: f64,
    t_argmin: f64,
    method: &'static str,
    grid_resolution: f64,
}

pub fn dual(args: &DualArgs) -> CliResult<Output> {
    let (_, law) = load_marginal(args.marginal.as_deref())?;
    let d = dual_bound(&*law, args.n, args.c)?;
    Ok(Output::new(DualResult {
        n: args.n,
        c: args.c,
        value: d.value,
        t_argmin: d.t_argmin,
        method: "dual_bound",
        grid_resolution: d.grid_resolution,
    }))
}
