use std::f64::consts::PI;
use std::path::Path;

use mixcenter::cauchy_mix::{
    generic_admissibility, ConvexMix, MixSampler, Mixer, MixerConfig, T_MIN,
};
use mixcenter::center_bounds::{
    cauchy_center_interval, cauchy_r_closed_form, cm_bounds, infinite_mean_classifier, MeanVerdict,
};
use mixcenter::discrete_mix::{
    ex01_center_two_excluded, ex01_couplings, lp_feasible_center, symmetrized_marginal_exact,
    FeasibilityOptions,
};
use mixcenter::distributions::{
    sample, CountableDiscreteEx01, Ex01Kind, FiniteDiscrete, GenericDensity, Pareto,
};
use mixcenter::rng::{substream, DEFAULT_SEED};
use mixcenter::Distribution;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, Output, Table};

const EXPECTATIONS: &str = include_str!("../../data/repro_expectations.json");

// kernel probes run at n = 3, c = 0.15
const N: usize = 3;
const C: f64 = 0.15;
const PROBE_T: [f64; 4] = [0.01, 0.5, 1.0, 4.0];

#[derive(Debug, Deserialize)]
struct Expectation {
    name: String,
    expected: Value,
    #[serde(default)]
    tol: f64,
}

#[derive(Debug, Serialize)]
struct ReproItem {
    name: String,
    expected: Value,
    computed: Value,
    tol: f64,
    diff: Option<f64>,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct ReproResult {
    seed: u64,
    passed: usize,
    failed: usize,
    items: Vec<ReproItem>,
}

struct Probe {
    mixer: Mixer,
}

impl Probe {
    fn new() -> CliResult<Self> {
        Ok(Probe {
            mixer: Mixer::new(MixerConfig::new(N, C))?,
        })
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn flag(b: bool) -> Value {
    Value::Bool(b)
}

fn compute(name: &str, probe: &Probe) -> CliResult<Value> {
    let kernel = probe.mixer.kernel();
    let comps = probe.mixer.knot_components();
    let f = kernel.density();
    let cauchy = GenericDensity::power_law(2.0)?;
    Ok(match name {
        "cauchy_interval_n3_lo" => num(cauchy_center_interval(3)?.lo),
        "cauchy_interval_n3_hi" => num(cauchy_center_interval(3)?.hi),
        "cauchy_interval_n2_hi" => num(cauchy_center_interval(2)?.hi),
        "cauchy_cm_b_star_n3" => {
            num(cm_bounds(&mixcenter::distributions::Cauchy::standard(), 3)?.b_star)
        }
        "cauchy_cm_a_star_n3" => {
            num(cm_bounds(&mixcenter::distributions::Cauchy::standard(), 3)?.a_star)
        }
        "geometric_mix_cm_a_star_nonnegative" => {
            let mu = CountableDiscreteEx01::new(Ex01Kind::Mu, 20)?;
            flag(cm_bounds(&mu, 3)?.a_star >= -1e-9)
        }
        "geometric_mix_cm_b_star_at_most_two_thirds" => {
            let mu = CountableDiscreteEx01::new(Ex01Kind::Mu, 20)?;
            flag(cm_bounds(&mu, 3)?.b_star <= 2.0 / 3.0 + 1e-9)
        }
        "cauchy_window_small_alpha_n3" => num(cauchy_r_closed_form(3, 1e-9)?),
        "pareto_half_with_point_masses_excluded" => {
            let p = Pareto::new(0.5, 1.0)?;
            let d = FiniteDiscrete::point(0.0);
            let laws: [&dyn Distribution; 3] = [&p, &d, &d];
            flag(infinite_mean_classifier(&laws) == MeanVerdict::Excluded)
        }
        "a_at_upper_level_negative" => flag(
            PROBE_T
                .iter()
                .all(|&t| kernel.eval_a(t, f.pdf(C + t)) < 0.0),
        ),
        "a_at_very_negative_level_positive" => flag(PROBE_T.iter().all(|&t| {
            let (near, far) = (kernel.eval_a(t, -1e3), kernel.eval_a(t, -1e6));
            near > 0.0 && far > 100.0 * near
        })),
        "a_tail_limit_n3" => num(kernel.eval_a(1e7, 0.0) + C),
        "k2_vanishes_above_upper_level" => flag(
            comps
                .iter()
                .filter(|k| f.pdf(C + (N - 1) as f64 * k.t) <= k.h)
                .all(|k| k.k2 == 0.0),
        ),
        "mu_t_mean_max_error" => num(comps
            .iter()
            .map(|k| (k.mean(N, C) - C).abs())
            .fold(0.0, f64::max)),
        "q_total_mass" => num(probe.mixer.t_measure().total_mass()),
        "q_cdf_at_t_min" => num(probe.mixer.t_measure().cdf(T_MIN)),
        "reconstruction_max_error" => {
            let mut worst: f64 = 0.0;
            for (t, s) in [
                (0.5, -0.5),
                (2.0, 0.0),
                (8.0, 0.5),
                (32.0, 1.0),
                (128.0, 0.25),
            ] {
                let y = C + s * t;
                worst = worst.max((kernel.nu_reconstructed(t, y)? - kernel.nu(t, y)?).abs());
            }
            num(worst)
        }
        "branch_two_alpha_formula_max_error" => num(comps
            .iter()
            .filter(|k| k.k4 > 0.0)
            .map(|k| {
                let a = k.k1 - (N - 1) as f64 * k.k2;
                (k.alpha(C) - a / (a + k.k4)).abs()
            })
            .fold(0.0, f64::max)),
        "center_above_limit_rejected_n3" => flag(Mixer::new(MixerConfig::new(3, 0.3)).is_err()),
        "convex_mix_center_half" => {
            let e = 2f64.ln() / PI;
            let a = Mixer::new(MixerConfig::new(3, e))?;
            let b = Mixer::new(MixerConfig::new(3, -e))?;
            num(ConvexMix::new(&a, &b, 0.5)?.center())
        }
        "cauchy_density_admissible" => flag(generic_admissibility(&cauchy, 3)?.ok),
        "cauchy_q_max_n3" => num(generic_admissibility(&cauchy, 3)?.q_max),
        "power_15_density_inadmissible" => {
            flag(!generic_admissibility(&GenericDensity::power_law(1.5)?, 3)?.ok)
        }
        "two_point_triple_feasible_at_2" => {
            let m = FiniteDiscrete::two_point(3, 1, 0.0, 1.0)?;
            let ms = [m.clone(), m.clone(), m];
            let v = lp_feasible_center(&ms, 2.0, FeasibilityOptions::default())?;
            flag(
                v.coupling()
                    .is_some_and(|c| v.is_feasible() && c.certify(&ms, 2.0, 1e-9, 1e-10).is_ok()),
            )
        }
        "geometric_x_sums_zero" => flag(
            ex01_couplings(20)?
                .mix_x
                .row_sums()
                .iter()
                .all(|&s| s == 0.0),
        ),
        "geometric_y_sums_one" => flag(
            ex01_couplings(20)?
                .mix_y
                .row_sums()
                .iter()
                .all(|&s| s == 1.0),
        ),
        "geometric_p_x1_at_1" => num(ex01_couplings(20)?
            .exact_prob(false, 0, 1.0)
            .to_f64()
            .unwrap_or(f64::NAN)),
        "geometric_p_y1_at_1" => num(ex01_couplings(20)?
            .exact_prob(true, 0, 1.0)
            .to_f64()
            .unwrap_or(f64::NAN)),
        "geometric_first_marginals_agree_k20" => {
            let e = ex01_couplings(20)?;
            flag((1..=20).all(|j| {
                let v = 2f64.powi(j);
                let p = e.exact_prob(true, 0, v);
                p == e.exact_prob(false, 0, v) && p.to_f64() == Some(2f64.powi(-(j + 1)))
            }))
        }
        "symmetrized_marginal_matches_mixture" => {
            let e = ex01_couplings(20)?;
            flag(symmetrized_marginal_exact(&e.mix_x).iter().all(|(v, p)| {
                let j = v.abs().log2().round() as i32;
                let expected = if *v > 0.0 {
                    2.0 / 3.0 * 2f64.powi(-(j + 1))
                } else {
                    1.0 / 3.0 * 2f64.powi(-j)
                };
                p.to_f64()
                    .is_some_and(|x| (x - expected).abs() <= 1e-16 * expected)
            }))
        }
        "center_two_excluded" => flag(ex01_center_two_excluded(20)?.excluded),
        "nu_empirical_p1_seed42" => {
            let nu = CountableDiscreteEx01::new(Ex01Kind::Nu, 20)?;
            let draws = sample(&nu, &mut substream(DEFAULT_SEED, "repro-nu", 0), 10_000);
            num(draws.iter().filter(|&&x| x == 1.0).count() as f64 / draws.len() as f64)
        }
        other => {
            return Err(CliError::parse(
                Path::new("repro_expectations.json"),
                format!("no computation for {other}"),
            ))
        }
    })
}

fn compare(exp: &Expectation, computed: &Value) -> (Option<f64>, bool) {
    match (&exp.expected, computed) {
        (Value::Number(e), Value::Number(c)) => {
            let d = (e.as_f64().unwrap_or(f64::NAN) - c.as_f64().unwrap_or(f64::NAN)).abs();
            (Some(d), d <= exp.tol)
        }
        (e, c) => (None, e == c),
    }
}

pub fn repro() -> CliResult<Output> {
    let expectations: Vec<Expectation> = serde_json::from_str(EXPECTATIONS)
        .map_err(|e| CliError::parse(Path::new("repro_expectations.json"), e))?;
    let probe = Probe::new()?;
    let mut items = Vec::with_capacity(expectations.len());
    for exp in expectations {
        let computed = compute(&exp.name, &probe)?;
        let (diff, pass) = compare(&exp, &computed);
        items.push(ReproItem {
            name: exp.name,
            expected: exp.expected,
            computed,
            tol: exp.tol,
            diff,
            pass,
        });
    }
    let passed = items.iter().filter(|i| i.pass).count();
    let failed = items.len() - passed;
    let rows = items
        .iter()
        .map(|i| {
            vec![
                i.name.clone(),
                i.expected.to_string(),
                i.computed.to_string(),
                fmt_f64(i.tol),
                i.diff.map(fmt_f64).unwrap_or_default(),
                i.pass.to_string(),
            ]
        })
        .collect();
    Ok(Output::new(ReproResult {
        seed: DEFAULT_SEED,
        passed,
        failed,
        items,
    })
    .with_table(Table {
        headers: ["name", "expected", "computed", "tol", "diff", "pass"]
            .map(String::from)
            .to_vec(),
        rows,
    })
    .with_ok(failed == 0))
}
