use std::path::{Path, PathBuf};

use mixcenter::cauchy_mix::{Branch, MixRow, MixSamples, Mixer, MixerConfig};
use mixcenter::rearrangement::{discretize, ra_flatten, row_sampler, QuantileMatrix, RaOptions};
use mixcenter::rng::substream;
use mixcenter::DistributionSpec;
use serde::{Deserialize, Serialize};

use super::{load_marginal, read_json, write_json};
use crate::args::{Engine, MixerArgs, SampleArgs};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, Output, SCHEMA_VERSION};

/// Directory for output files when no explicit path is given.
pub const OUT_DIR_ENV: &str = "MIXCENTER_OUT_DIR";

/// Sidecar describing a sample CSV; enough to rebuild the sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub schema_version: u32,
    pub engine: Engine,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub tail_eps: f64,
    pub ra_grid_m: usize,
    pub seed: u64,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_deficit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal: Option<DistributionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spread: Option<f64>,
}

/// `s.csv` -> `s.meta.json`.
pub fn meta_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

pub fn mixer_config(args: &MixerArgs, c: f64) -> MixerConfig {
    MixerConfig {
        tail_eps: args.tail_eps,
        ra_grid_m: args.ra_grid_m,
        seed: args.seed,
        ..MixerConfig::new(args.n, c)
    }
}

pub fn require_c(args: &MixerArgs) -> CliResult<f64> {
    args.c
        .ok_or_else(|| CliError::Usage("--c is required for the mixer engine".into()))
}

fn resolve_out(out: Option<&Path>, default_name: String) -> PathBuf {
    match out {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."))
            .join(default_name),
    }
}

#[derive(Debug, Serialize)]
struct SampleResult {
    csv: String,
    meta: String,
    rows: usize,
    mean_row_sum: f64,
    max_abs_deviation: f64,
    bound_violations: Option<usize>,
}

pub fn sample(args: &SampleArgs) -> CliResult<Output> {
    let m = &args.mixer;
    match args.engine {
        Engine::Mixer => {
            let c = require_c(m)?;
            let mixer = Mixer::new(mixer_config(m, c))?;
            let s = mixer.sample(m.count)?;
            let md = mixer.metadata();
            let meta = SampleMeta {
                schema_version: SCHEMA_VERSION,
                engine: Engine::Mixer,
                n: m.n,
                c: Some(c),
                tail_eps: md.tail_eps,
                ra_grid_m: md.ra_grid_m,
                seed: md.seed,
                count: m.count,
                mass_deficit: Some(md.mass_deficit),
                t_max: Some(md.t_max),
                marginal: None,
                spread: None,
            };
            let path = resolve_out(
                args.out.as_deref(),
                format!("sample_n{}_c{c}_seed{}.csv", m.n, m.seed),
            );
            write_mixer_csv(&path, &s)?;
            write_json(&meta_path(&path), &meta)?;
            let target = m.n as f64 * c;
            let max_dev = s
                .row_sum
                .iter()
                .map(|x| (x - target).abs())
                .fold(0.0, f64::max);
            Ok(Output::new(SampleResult {
                csv: path.display().to_string(),
                meta: meta_path(&path).display().to_string(),
                rows: s.count(),
                mean_row_sum: s.mean_row_sum(),
                max_abs_deviation: max_dev,
                bound_violations: Some(s.bound_violations()),
            }))
        }
        Engine::Ra => {
            let (spec, law) = load_marginal(args.marginal.as_deref())?;
            let col = discretize(&*law, m.ra_grid_m)?;
            let matrix = QuantileMatrix::shuffled(vec![col; m.n], m.seed)?;
            let flat = ra_flatten(matrix, RaOptions::default());
            let mut rng = substream(m.seed, "ra-rows", 0);
            let values: Vec<f64> = (0..m.count)
                .flat_map(|_| row_sampler(&flat.matrix, &mut rng))
                .collect();
            let meta = SampleMeta {
                schema_version: SCHEMA_VERSION,
                engine: Engine::Ra,
                n: m.n,
                c: None,
                tail_eps: m.tail_eps,
                ra_grid_m: m.ra_grid_m,
                seed: m.seed,
                count: m.count,
                mass_deficit: None,
                t_max: None,
                marginal: Some(spec),
                spread: Some(flat.spread),
            };
            let path = resolve_out(
                args.out.as_deref(),
                format!("sample_ra_n{}_seed{}.csv", m.n, m.seed),
            );
            write_ra_csv(&path, m.n, &values)?;
            write_json(&meta_path(&path), &meta)?;
            let sums: Vec<f64> = values.chunks(m.n).map(|r| r.iter().sum()).collect();
            let mean = sums.iter().sum::<f64>() / sums.len().max(1) as f64;
            let max_dev = sums.iter().map(|s| (s - mean).abs()).fold(0.0, f64::max);
            Ok(Output::new(SampleResult {
                csv: path.display().to_string(),
                meta: meta_path(&path).display().to_string(),
                rows: m.count,
                mean_row_sum: mean,
                max_abs_deviation: max_dev,
                bound_violations: None,
            }))
        }
    }
}

fn value_headers(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("x{j}")).collect()
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(CliError::io(path))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::parse(path, e)
}

/// Columns `x1..xn, t, branch, row_sum`; `branch` is 1 (two-point),
/// 2 (atom plus uniform) or 0 (composite).
pub fn write_mixer_csv(path: &Path, s: &MixSamples) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    let mut headers = value_headers(s.n);
    headers.extend(["t", "branch", "row_sum"].map(String::from));
    w.write_record(&headers).map_err(csv_error(path))?;
    for i in 0..s.count() {
        let mut rec: Vec<String> = s.row(i).iter().map(|&x| fmt_f64(x)).collect();
        rec.push(fmt_f64(s.t[i]));
        rec.push(s.branch[i].code().to_string());
        rec.push(fmt_f64(s.row_sum[i]));
        w.write_record(&rec).map_err(csv_error(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

/// Columns `x1..xn, row_sum`.
pub fn write_ra_csv(path: &Path, n: usize, values: &[f64]) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    let mut headers = value_headers(n);
    headers.push("row_sum".into());
    w.write_record(&headers).map_err(csv_error(path))?;
    for row in values.chunks(n) {
        let mut rec: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        rec.push(fmt_f64(row.iter().sum()));
        w.write_record(&rec).map_err(csv_error(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn read_meta(csv: &Path) -> CliResult<SampleMeta> {
    let meta: SampleMeta = read_json(&meta_path(csv))?;
    if meta.schema_version != SCHEMA_VERSION {
        return Err(CliError::parse(
            &meta_path(csv),
            format!("schema version {} is not supported", meta.schema_version),
        ));
    }
    Ok(meta)
}

fn read_records(path: &Path, expected: &[String]) -> CliResult<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error(path))?;
    let headers: Vec<String> = r
        .headers()
        .map_err(csv_error(path))?
        .iter()
        .map(String::from)
        .collect();
    if headers != expected {
        return Err(CliError::parse(
            path,
            format!("expected columns {expected:?}, found {headers:?}"),
        ));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_error(path))?;
        let row = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| CliError::parse(path, format!("data row {}: {e}", line + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Loads a mixer CSV; per-row bounds are recomputed by `mixer`.
pub fn read_mixer_csv(path: &Path, mixer: &Mixer, n: usize, center: f64) -> CliResult<MixSamples> {
    let mut headers = value_headers(n);
    headers.extend(["t", "branch", "row_sum"].map(String::from));
    let rows = read_records(path, &headers)?;
    let mut s = MixSamples::with_capacity(n, center, rows.len());
    for (i, row) in rows.into_iter().enumerate() {
        let code = row[n + 1];
        let branch = (code.fract() == 0.0 && (0.0..=255.0).contains(&code))
            .then(|| Branch::from_code(code as u8))
            .flatten()
            .ok_or_else(|| {
                CliError::parse(path, format!("data row {}: unknown branch {code}", i + 1))
            })?;
        let t = row[n];
        s.push(MixRow {
            values: row[..n].to_vec(),
            t,
            branch,
            row_sum: row[n + 2],
            bound: mixer.row_bound(t, branch)?,
        });
    }
    Ok(s)
}

/// Loads the value columns of an RA CSV, row-major.
pub fn read_ra_csv(path: &Path, n: usize) -> CliResult<Vec<f64>> {
    let mut headers = value_headers(n);
    headers.push("row_sum".into());
    let rows = read_records(path, &headers)?;
    Ok(rows
        .into_iter()
        .flat_map(|r| r.into_iter().take(n))
        .collect())
}
