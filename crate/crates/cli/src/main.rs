mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliResult;
use output::{emit, Output, RunConfig};

fn config(cli: &Cli) -> RunConfig {
    let mut cfg = match &cli.command {
        Command::Interval { n } => RunConfig {
            n: Some(*n),
            ..RunConfig::new("interval")
        },
        Command::Bounds(a) => RunConfig {
            n: a.n,
            ..RunConfig::new("bounds")
        }
        .marginal_path(a.marginal.as_deref())
        .marginal_path(a.marginals.as_deref()),
        Command::Dual(a) => RunConfig {
            n: Some(a.n),
            c: Some(a.c),
            ..RunConfig::new("dual")
        }
        .marginal_path(a.marginal.as_deref()),
        Command::Feasible(a) => RunConfig {
            c: Some(a.center),
            ..RunConfig::new("feasible")
        }
        .marginal_path(Some(&a.marginals)),
        Command::Centers(a) => RunConfig::new("centers").marginal_path(Some(&a.marginals)),
        Command::Sample(a) => RunConfig {
            n: Some(a.mixer.n),
            c: a.mixer.c,
            seed: Some(a.mixer.seed),
            count: Some(a.mixer.count),
            ra_grid_m: Some(a.mixer.ra_grid_m),
            tail_eps: Some(a.mixer.tail_eps),
            out: a.out.as_ref().map(|p| p.display().to_string()),
            ..RunConfig::new("sample")
        }
        .marginal_path(a.marginal.as_deref()),
        Command::Verify(a) => RunConfig {
            n: Some(a.mixer.n),
            c: a.mixer.c.or(a.center),
            seed: Some(a.mixer.seed),
            count: Some(a.mixer.count),
            ra_grid_m: Some(a.mixer.ra_grid_m),
            tail_eps: Some(a.mixer.tail_eps),
            out: a.samples.as_ref().map(|p| p.display().to_string()),
            ..RunConfig::new("verify")
        }
        .marginal_path(a.marginals.as_deref()),
        Command::Ex01(a) => RunConfig {
            out: a.out_dir.as_ref().map(|p| p.display().to_string()),
            ..RunConfig::new("ex01")
        },
        Command::Repro => RunConfig {
            seed: Some(mixcenter::rng::DEFAULT_SEED),
            ..RunConfig::new("repro")
        },
    };
    cfg.format = Some(cli.format);
    cfg
}

fn dispatch(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Interval { n } => commands::interval(*n),
        Command::Bounds(a) => commands::bounds(a),
        Command::Dual(a) => commands::dual(a),
        Command::Feasible(a) => commands::feasible(a),
        Command::Centers(a) => commands::centers(a),
        Command::Sample(a) => commands::sample(a),
        Command::Verify(a) => commands::verify(a),
        Command::Ex01(a) => commands::ex01(a),
        Command::Repro => commands::repro(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = config(&cli);
    let result = dispatch(&cli).and_then(|out| {
        emit(&cfg, &out, cli.format, &mut std::io::stdout().lock())?;
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("mixcenter {}: one or more checks failed", cfg.command);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("mixcenter {}: {e}", cfg.command);
            ExitCode::from(e.exit_code())
        }
    }
}
