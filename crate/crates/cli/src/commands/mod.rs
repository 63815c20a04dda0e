mod bounds;
mod discrete;
mod repro;
mod sample;
mod verify;

use std::path::Path;

use mixcenter::distributions::{Cauchy, FiniteDiscrete};
use mixcenter::{Distribution, DistributionSpec};
use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

pub use bounds::{bounds, dual, interval};
pub use discrete::{centers, ex01, feasible};
pub use repro::repro;
pub use sample::sample;
pub use verify::verify;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::parse(path, e))?;
    std::fs::write(path, text + "\n").map_err(CliError::io(path))
}

/// The law in `path`, or the standard Cauchy law.
pub fn load_marginal(path: Option<&Path>) -> CliResult<(DistributionSpec, Box<dyn Distribution>)> {
    match path {
        Some(p) => {
            let spec: DistributionSpec = read_json(p)?;
            let law = spec.build()?;
            Ok((spec, law))
        }
        None => Ok((
            DistributionSpec::Cauchy { scale: 1.0 },
            Box::new(Cauchy::standard()),
        )),
    }
}

pub fn load_marginals(path: &Path) -> CliResult<Vec<Box<dyn Distribution>>> {
    let specs: Vec<DistributionSpec> = read_json(path)?;
    Ok(specs
        .iter()
        .map(|s| s.build())
        .collect::<mixcenter::Result<_>>()?)
}

pub fn load_finite_marginals(path: &Path) -> CliResult<Vec<FiniteDiscrete>> {
    let specs: Vec<DistributionSpec> = read_json(path)?;
    Ok(specs
        .iter()
        .map(|s| s.build_finite())
        .collect::<mixcenter::Result<_>>()?)
}
