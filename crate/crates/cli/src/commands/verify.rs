use std::path::Path;

use mixcenter::cauchy_mix::{Mixer, MixerConfig};
use mixcenter::verify::{run_coupling_suite, run_ex01_suite, run_mixer_suite, run_ra_suite};
use mixcenter::{Coupling, VerificationReport};
use serde::Deserialize;

use super::sample::{mixer_config, read_meta, read_mixer_csv, read_ra_csv, require_c};
use super::{load_finite_marginals, read_json};
use crate::args::{Engine, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, Output, Table};

#[derive(Debug, Deserialize)]
struct CouplingFile {
    support: Vec<Vec<f64>>,
    weights: Vec<f64>,
    #[serde(default)]
    residual_mass: f64,
}

fn from_samples(path: &Path) -> CliResult<VerificationReport> {
    let meta = read_meta(path)?;
    match meta.engine {
        Engine::Mixer => {
            let c = meta
                .c
                .ok_or_else(|| CliError::parse(path, "mixer metadata lacks c"))?;
            let cfg = MixerConfig {
                tail_eps: meta.tail_eps,
                ra_grid_m: meta.ra_grid_m,
                seed: meta.seed,
                ..MixerConfig::new(meta.n, c)
            };
            let mixer = Mixer::new(cfg)?;
            let s = read_mixer_csv(path, &mixer, meta.n, c)?;
            Ok(run_mixer_suite(&mixer, Some(&s), s.count(), meta.seed)?)
        }
        Engine::Ra => {
            let spec = meta
                .marginal
                .ok_or_else(|| CliError::parse(path, "RA metadata lacks the marginal"))?;
            let spread = meta
                .spread
                .ok_or_else(|| CliError::parse(path, "RA metadata lacks the spread"))?;
            let law = spec.build()?;
            let values = read_ra_csv(path, meta.n)?;
            Ok(run_ra_suite(
                &values,
                meta.n,
                &*law,
                meta.ra_grid_m,
                spread,
            )?)
        }
    }
}

fn from_coupling(args: &VerifyArgs, path: &Path) -> CliResult<VerificationReport> {
    let file: CouplingFile = read_json(path)?;
    let n = file.support.first().map_or(0, Vec::len);
    let coupling = Coupling::new(n, file.support, file.weights, file.residual_mass)?;
    let marginals_path = args
        .marginals
        .as_deref()
        .expect("clap requires --marginals");
    let marginals = load_finite_marginals(marginals_path)?;
    let center = args.center.expect("clap requires --center");
    Ok(run_coupling_suite(&coupling, &marginals, center, args.tol)?)
}

pub fn verify(args: &VerifyArgs) -> CliResult<Output> {
    let report = if let Some(k) = args.ex01 {
        run_ex01_suite(k)?
    } else if let Some(path) = &args.coupling {
        from_coupling(args, path)?
    } else if let Some(path) = &args.samples {
        from_samples(path)?
    } else {
        let m = &args.mixer;
        let mixer = Mixer::new(mixer_config(m, require_c(m)?))?;
        run_mixer_suite(&mixer, None, m.count, m.seed)?
    };
    let rows = report
        .invariant_results
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.pass.to_string(),
                fmt_f64(r.measured),
                fmt_f64(r.threshold),
            ]
        })
        .collect();
    let ok = report.all_pass();
    Ok(Output::new(&report)
        .with_table(Table {
            headers: ["name", "pass", "measured", "threshold"]
                .map(String::from)
                .to_vec(),
            rows,
        })
        .with_ok(ok))
}
