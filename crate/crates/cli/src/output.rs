use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::error::{CliError, CliResult};

/// Version of the JSON envelope and result layouts.
pub const SCHEMA_VERSION: u32 = 1;

/// Inputs of one invocation, echoed in every JSON envelope.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub marginal_paths: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ra_grid_m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new(command: &'static str) -> Self {
        RunConfig {
            command,
            ..Default::default()
        }
    }

    pub fn marginal_path(mut self, path: Option<&Path>) -> Self {
        if let Some(p) = path {
            self.marginal_paths.push(p.display().to_string());
        }
        self
    }
}

/// Rows for `--format csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// A command result. `ok = false` reports a failed check (exit code 1)
/// after the result is written.
#[derive(Debug)]
pub struct Output {
    pub result: Value,
    pub table: Option<Table>,
    pub ok: bool,
}

impl Output {
    pub fn new(result: impl Serialize) -> Self {
        Output {
            result: serde_json::to_value(result).expect("result serializes"),
            table: None,
            ok: true,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }
}

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    command: &'static str,
    config: &'a RunConfig,
    result: &'a Value,
}

pub fn emit(
    config: &RunConfig,
    out: &Output,
    format: Format,
    sink: &mut dyn Write,
) -> CliResult<()> {
    let stdout = Path::new("<stdout>");
    match format {
        Format::Json => {
            let env = Envelope {
                schema_version: SCHEMA_VERSION,
                command: config.command,
                config,
                result: &out.result,
            };
            serde_json::to_writer_pretty(&mut *sink, &env)
                .map_err(|e| CliError::parse(stdout, e))?;
            writeln!(sink).map_err(CliError::io(stdout))
        }
        Format::Csv => {
            let table = out.table.clone().unwrap_or_else(|| flatten(&out.result));
            let mut w = csv::Writer::from_writer(sink);
            let csv_err = |e: csv::Error| CliError::parse(stdout, e);
            w.write_record(&table.headers).map_err(csv_err)?;
            for row in &table.rows {
                w.write_record(row).map_err(csv_err)?;
            }
            w.flush().map_err(CliError::io(stdout))
        }
    }
}

// one row of the top-level fields; nested values stay JSON-encoded
fn flatten(result: &Value) -> Table {
    match result {
        Value::Object(map) => Table {
            headers: map.keys().cloned().collect(),
            rows: vec![map.values().map(cell).collect()],
        },
        other => Table {
            headers: vec!["value".into()],
            rows: vec![vec![cell(other)]],
        },
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(x) => match x.as_f64() {
            Some(f) if !x.is_i64() && !x.is_u64() => fmt_f64(f),
            _ => x.to_string(),
        },
        other => other.to_string(),
    }
}
