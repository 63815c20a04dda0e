use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{ks_critical_99, ks_distance, ks_two_sample};
use crate::cauchy_mix::{Branch, MixSampler, MixSamples, Mixer, MixerConfig};
use crate::discrete_mix::{
    ex01_center_two_excluded, ex01_couplings, symmetrized_marginal_exact, Coupling,
};
use crate::distributions::{Cauchy, Distribution, FiniteDiscrete};
use crate::error::{domain, Result};

const MANIFEST: &str = include_str!("invariants.manifest");

// rows used for the reflection check
const REFLECTION_ROWS: usize = 20_000;

/// Invariant names of suite `target` (`mixer`, `coupling` or `ex01`), in
/// report order.
pub fn manifest(target: &str) -> Vec<&'static str> {
    let header = format!("[{target}]");
    MANIFEST
        .lines()
        .map(str::trim)
        .skip_while(|l| *l != header)
        .skip(1)
        .take_while(|l| !l.starts_with('['))
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// One checked property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantResult {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
}

/// Machine-readable result of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub target: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub sample_count: usize,
    pub ks_per_coordinate: Vec<f64>,
    pub sum_mean: Option<f64>,
    pub sum_max_abs_dev: Option<f64>,
    pub invariant_results: Vec<InvariantResult>,
}

impl VerificationReport {
    fn new(target: &str, seed: Option<u64>, config: serde_json::Value) -> Self {
        VerificationReport {
            target: target.into(),
            seed,
            config,
            sample_count: 0,
            ks_per_coordinate: Vec::new(),
            sum_mean: None,
            sum_max_abs_dev: None,
            invariant_results: Vec::new(),
        }
    }

    /// Records `measured <= threshold`.
    fn at_most(&mut self, name: &str, measured: f64, threshold: f64) {
        self.record(name, measured <= threshold, measured, threshold);
    }

    fn record(&mut self, name: &str, pass: bool, measured: f64, threshold: f64) {
        self.invariant_results.push(InvariantResult {
            name: name.into(),
            pass,
            measured,
            threshold,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.invariant_results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&InvariantResult> {
        self.invariant_results.iter().filter(|r| !r.pass).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.invariant_results
            .iter()
            .map(|r| r.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Row-sum deviations for one branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchSumStats {
    pub branch: Branch,
    pub count: usize,
    pub mean_dev: f64,
    pub max_abs_dev: f64,
}

/// Deviations of row sums from a target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumStats {
    pub count: usize,
    pub mean_dev: f64,
    pub max_abs_dev: f64,
    pub per_branch: Vec<BranchSumStats>,
}

/// Row-sum deviations of a row-major `values` matrix with `n` columns.
pub fn sum_stats(
    values: &[f64],
    n: usize,
    target: f64,
    branches: Option<&[Branch]>,
) -> Result<SumStats> {
    if n == 0 || values.is_empty() || !values.len().is_multiple_of(n) {
        return domain(format!(
            "need a non-empty matrix with {n} columns, got {} values",
            values.len()
        ));
    }
    let rows = values.len() / n;
    if branches.is_some_and(|b| b.len() != rows) {
        return domain("one branch label per row required");
    }
    let devs: Vec<f64> = values
        .chunks(n)
        .map(|r| r.iter().sum::<f64>() - target)
        .collect();
    let summarize = |it: &mut dyn Iterator<Item = f64>| {
        let (mut count, mut sum, mut max) = (0usize, 0.0, 0.0f64);
        for d in it {
            count += 1;
            sum += d;
            max = max.max(d.abs());
        }
        (count, if count > 0 { sum / count as f64 } else { 0.0 }, max)
    };
    let (count, mean_dev, max_abs_dev) = summarize(&mut devs.iter().copied());
    let mut per_branch = Vec::new();
    if let Some(bs) = branches {
        for b in [Branch::TwoPoint, Branch::AtomUniform, Branch::Composite] {
            let (count, mean_dev, max_abs_dev) = summarize(
                &mut devs
                    .iter()
                    .zip(bs)
                    .filter(|(_, x)| **x == b)
                    .map(|(d, _)| *d),
            );
            if count > 0 {
                per_branch.push(BranchSumStats {
                    branch: b,
                    count,
                    mean_dev,
                    max_abs_dev,
                });
            }
        }
    }
    Ok(SumStats {
        count,
        mean_dev,
        max_abs_dev,
        per_branch,
    })
}

/// Runs the mixer suite: every construction invariant at the `t`-grid
/// knots, then the sample checks on `samples` (or on `count` fresh rows
/// drawn with `seed`).
pub fn run_mixer_suite(
    mixer: &Mixer,
    samples: Option<&MixSamples>,
    count: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let cfg = *mixer.config();
    let mut rep = VerificationReport::new(
        "mixer",
        Some(seed),
        serde_json::to_value(cfg).expect("config"),
    );
    let kernel = mixer.kernel();
    let (n, c) = (cfg.n, kernel.c());
    let nf = n as f64;
    let comps = mixer.knot_components();
    let f = kernel.density();

    rep.at_most("h_non_increasing", mixer.hfun().max_increase(), 1e-12);
    let h_range = comps
        .iter()
        .map(|k| (-k.h).max(k.h - f.pdf(c + k.t)).max(0.0))
        .fold(0.0, f64::max);
    rep.at_most("h_range", h_range, 0.0);
    let a_res = comps
        .iter()
        .map(|k| kernel.eval_a(k.t, k.h).abs())
        .fold(0.0, f64::max);
    rep.at_most("a_root_residual", a_res, cfg.root_tol);
    let a0 = comps
        .iter()
        .map(|k| kernel.eval_a(k.t, 0.0))
        .fold(f64::INFINITY, f64::min);
    rep.record("a_at_zero_nonnegative", a0 >= -1e-10, a0, -1e-10);
    let signs: Vec<bool> = comps.iter().map(|k| kernel.eval_m(k.t) >= 0.0).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let from_nonneg = changes == 0 || signs[0];
    rep.record(
        "m_single_sign_change",
        changes <= 1 && from_nonneg,
        changes as f64,
        1.0,
    );
    let weights = comps
        .iter()
        .map(|k| {
            let neg = (-k.k1).max(-k.k2).max(-k.k4).max(0.0);
            neg.max((k.q_t - (k.k1 + k.k2 + k.k4)).abs())
        })
        .fold(0.0, f64::max);
    rep.at_most("component_weights", weights, 0.0);
    let mean_ineq = comps
        .iter()
        .map(|k| (k.width(c) - nf * k.t) / (nf * k.t))
        .fold(f64::NEG_INFINITY, f64::max);
    rep.at_most("mean_inequality", mean_ineq, 1e-12);
    let mean_err = comps
        .iter()
        .map(|k| (k.mean(n, c) - c).abs())
        .fold(0.0, f64::max);
    rep.at_most("mu_t_mean", mean_err, 1e-8);
    let q = mixer.t_measure();
    rep.at_most(
        "q_total_mass",
        (q.total_mass() - 1.0).abs(),
        cfg.tail_eps + 1e-6,
    );
    rep.at_most(
        "q_trapezoid_agreement",
        (q.trapezoid_mass() - q.total_mass()).abs(),
        1e-3,
    );
    let mut recon: f64 = 0.0;
    for (t, s) in [
        (0.5, -0.5),
        (2.0, 0.0),
        (8.0, 0.5),
        (32.0, 1.0),
        (128.0, 0.25),
    ] {
        let y = c + s * t;
        let d = (kernel.nu_reconstructed(t, y)? - kernel.nu(t, y)?).abs();
        recon = recon.max(d);
    }
    rep.at_most("reconstruction", recon, 1e-4);

    let fresh;
    let samples = match samples {
        Some(s) => s,
        None => {
            fresh = mixer.sample_with_seed(count, seed)?;
            &fresh
        }
    };
    // the reflection draw also builds the coupling tables checked below,
    // which loaded samples would otherwise leave untouched
    let mirror = Mixer::new(MixerConfig { c: -cfg.c, ..cfg })?;
    let rows = REFLECTION_ROWS.min(count.max(1));
    let a = mixer.sample_with_seed(rows, seed)?;
    let b = mirror.sample_with_seed(rows, seed)?;
    let mismatches = a
        .values
        .iter()
        .zip(&b.values)
        .filter(|(x, y)| **x != -**y)
        .count();
    let m = cfg.ra_grid_m;
    let mut bad_tables = 0;
    for table in mixer.tables().built_tables() {
        let mut counts = vec![0usize; m];
        for i in 0..table.rows() {
            for &l in table.row(i) {
                counts[l as usize] += 1;
            }
        }
        if counts.iter().any(|&k| k != table.cols()) {
            bad_tables += 1;
        }
    }
    rep.at_most("coupling_table_marginals", bad_tables as f64, 0.0);
    rep.at_most(
        "coupling_table_deviation",
        mixer.tables().max_deviation(),
        nf / m as f64,
    );

    rep.sample_count = samples.count();
    let cauchy = Cauchy::standard();
    rep.ks_per_coordinate = (0..n)
        .map(|j| ks_distance(&samples.column(j), |x| cauchy.cdf(x)))
        .collect::<Result<_>>()?;
    let ks_max = rep.ks_per_coordinate.iter().copied().fold(0.0, f64::max);
    rep.at_most("ks_marginals", ks_max, ks_critical_99(samples.count()));
    let stats = sum_stats(&samples.values, n, nf * cfg.c, Some(&samples.branch))?;
    // sums recomputed from the values; recorded sums are not trusted
    let sums: Vec<f64> = samples.values.chunks(n).map(|r| r.iter().sum()).collect();
    let sum_mean = sums.iter().sum::<f64>() / sums.len().max(1) as f64;
    rep.sum_mean = Some(sum_mean);
    rep.sum_max_abs_dev = Some(stats.max_abs_dev);
    let mut violations = 0;
    let mut branch_one: f64 = 0.0;
    for (i, s) in sums.iter().enumerate() {
        let dev = (s - nf * cfg.c).abs();
        if !(dev <= samples.bound[i]) {
            violations += 1;
        }
        if samples.branch[i] == Branch::TwoPoint {
            branch_one = branch_one.max(dev / (c + nf * samples.t[i]));
        }
    }
    rep.at_most("row_sum_bound", violations as f64, 0.0);
    rep.at_most("branch_one_exact", branch_one, 2.0 * nf * f64::EPSILON);
    rep.at_most("mean_row_sum", (sum_mean - nf * cfg.c).abs(), 1e-3);
    let mut exch: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            exch = exch.max(ks_two_sample(&samples.column(i), &samples.column(j))?);
        }
    }
    rep.at_most("exchangeability", exch, 0.01);
    rep.at_most("reflection", mismatches as f64, 0.0);
    Ok(rep)
}

/// Checks a coupling against its marginals and claimed center.
pub fn run_coupling_suite(
    coupling: &Coupling,
    marginals: &[FiniteDiscrete],
    center: f64,
    tol: f64,
) -> Result<VerificationReport> {
    if marginals.len() != coupling.n {
        return domain(format!(
            "coupling has {} coordinates but {} marginals were given",
            coupling.n,
            marginals.len()
        ));
    }
    let config = serde_json::json!({ "n": coupling.n, "center": center, "tol": tol });
    let mut rep = VerificationReport::new("coupling", None, config);
    let min_w = coupling
        .weights
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    rep.record("weights_nonnegative", min_w >= 0.0, min_w, 0.0);
    let total: f64 = coupling.weights.iter().sum::<f64>() + coupling.residual_mass;
    rep.at_most("weights_total", (total - 1.0).abs(), 1e-12);
    rep.at_most(
        "marginal_match",
        coupling.max_marginal_residual(marginals),
        1e-10,
    );
    let dev = coupling.max_sum_deviation(center);
    rep.at_most("support_sums", dev, tol);
    rep.sample_count = coupling.len();
    rep.sum_mean = Some(
        coupling
            .row_sums()
            .iter()
            .zip(&coupling.weights)
            .map(|(s, w)| s * w)
            .sum::<f64>()
            / (1.0 - coupling.residual_mass),
    );
    rep.sum_max_abs_dev = Some(dev);
    Ok(rep)
}

/// Exact checks of the two geometric couplings truncated at level `k`.
pub fn run_ex01_suite(k: u32) -> Result<VerificationReport> {
    let e = ex01_couplings(k)?;
    let mut rep = VerificationReport::new("ex01", None, serde_json::json!({ "k": k }));
    rep.at_most("x_sums_zero", e.mix_x.max_sum_deviation(0.0), 0.0);
    rep.at_most("y_sums_one", e.mix_y.max_sum_deviation(1.0), 0.0);
    let third = e.mix_x.marginal(2) == e.mix_y.marginal(2);
    rep.record(
        "third_marginal_equal",
        third,
        if third { 0.0 } else { 1.0 },
        0.0,
    );
    let mut mismatched = 0usize;
    for j in 1..=k as i32 {
        let v = 2f64.powi(j);
        let expected = BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(j as u32 + 1));
        if e.exact_prob(true, 0, v) != expected || e.exact_prob(false, 0, v) != expected {
            mismatched += 1;
        }
    }
    rep.at_most("first_marginal_equal", mismatched as f64, 0.0);
    let half = BigRational::new(1.into(), 2.into());
    let at_one = e.exact_prob(false, 0, 1.0) == half && e.exact_prob(true, 0, 1.0) == half;
    rep.record("atom_at_one", at_one, if at_one { 0.0 } else { 1.0 }, 0.0);
    // symmetrized X marginal against (2ν + γ)/3, atom by atom
    let two = num_bigint::BigInt::from(2);
    let third_r = BigRational::new(1.into(), 3.into());
    let mut sym_bad = 0usize;
    for (v, p) in symmetrized_marginal_exact(&e.mix_x) {
        let j = v.abs().log2().round() as u32;
        let expected = if v > 0.0 {
            BigRational::new(2.into(), 3.into()) * BigRational::new(One::one(), two.pow(j + 1))
        } else {
            third_r.clone() * BigRational::new(One::one(), two.pow(j))
        };
        if p != expected || p.is_zero() {
            sym_bad += 1;
        }
    }
    rep.at_most("symmetrized_marginal", sym_bad as f64, 0.0);
    let ex = ex01_center_two_excluded(k)?;
    rep.record("center_two_excluded", ex.excluded, 2.0 / 3.0, 1.0);
    rep.sample_count = e.mix_x.len() + e.mix_y.len();
    Ok(rep)
}

/// Checks rows drawn from a rearranged `m`-point discretization of
/// `marginal`: per-coordinate KS with a `1/(2m)` discretization allowance,
/// and row sums within the arrangement's `spread`.
pub fn run_ra_suite(
    values: &[f64],
    n: usize,
    marginal: &dyn Distribution,
    m: usize,
    spread: f64,
) -> Result<VerificationReport> {
    if n == 0 || values.is_empty() || !values.len().is_multiple_of(n) {
        return domain(format!(
            "need a non-empty matrix with {n} columns, got {} values",
            values.len()
        ));
    }
    let config = serde_json::json!({ "n": n, "ra_grid_m": m, "spread": spread });
    let mut rep = VerificationReport::new("ra", None, config);
    let rows = values.len() / n;
    rep.sample_count = rows;
    rep.ks_per_coordinate = (0..n)
        .map(|j| {
            let col: Vec<f64> = values.iter().skip(j).step_by(n).copied().collect();
            ks_distance(&col, |x| marginal.cdf(x))
        })
        .collect::<Result<_>>()?;
    let ks_max = rep.ks_per_coordinate.iter().copied().fold(0.0, f64::max);
    rep.at_most(
        "ks_marginals",
        ks_max,
        ks_critical_99(rows) + 0.5 / m as f64,
    );
    let sums: Vec<f64> = values.chunks(n).map(|r| r.iter().sum()).collect();
    let lo = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = sums.iter().sum::<f64>() / rows as f64;
    rep.sum_mean = Some(mean);
    rep.sum_max_abs_dev = Some((hi - mean).max(mean - lo));
    rep.at_most("row_sum_spread", hi - lo, spread * (1.0 + 1e-12) + 1e-12);
    Ok(rep)
}
