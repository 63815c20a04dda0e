use serde::{Deserialize, Serialize};

use super::{
    AtomPlusUniform, Cauchy, CountableDiscreteEx01, Distribution, Ex01Kind, FiniteDiscrete,
    GenericDensity, Pareto, Uniform,
};
use crate::error::{Error, Result};

fn default_scale() -> f64 {
    1.0
}

fn default_truncation() -> u32 {
    20
}

/// JSON description of a one-dimensional law, e.g.
/// `{"kind":"finite","atoms":[[0,0.5],[1,0.5]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Cauchy {
        #[serde(default = "default_scale")]
        scale: f64,
    },
    Finite {
        atoms: FiniteDiscrete,
    },
    Point {
        value: f64,
    },
    Ex01Nu {
        #[serde(rename = "truncation_K", default = "default_truncation")]
        truncation_k: u32,
    },
    Ex01Gamma {
        #[serde(rename = "truncation_K", default = "default_truncation")]
        truncation_k: u32,
    },
    Ex01Mu {
        #[serde(rename = "truncation_K", default = "default_truncation")]
        truncation_k: u32,
    },
    AtomUniform {
        atom_x: f64,
        right_y: f64,
        atom_weight: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Pareto {
        shape: f64,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    PowerDensity {
        exponent: f64,
    },
}

impl DistributionSpec {
    pub fn build(&self) -> Result<Box<dyn Distribution>> {
        Ok(match self {
            DistributionSpec::Cauchy { scale } => Box::new(Cauchy::new(*scale)?),
            DistributionSpec::Finite { atoms } => Box::new(atoms.clone()),
            DistributionSpec::Point { value } => Box::new(FiniteDiscrete::point(*value)),
            DistributionSpec::Ex01Nu { truncation_k } => {
                Box::new(CountableDiscreteEx01::new(Ex01Kind::Nu, *truncation_k)?)
            }
            DistributionSpec::Ex01Gamma { truncation_k } => {
                Box::new(CountableDiscreteEx01::new(Ex01Kind::Gamma, *truncation_k)?)
            }
            DistributionSpec::Ex01Mu { truncation_k } => {
                Box::new(CountableDiscreteEx01::new(Ex01Kind::Mu, *truncation_k)?)
            }
            DistributionSpec::AtomUniform {
                atom_x,
                right_y,
                atom_weight,
            } => Box::new(AtomPlusUniform::new(*atom_x, *right_y, *atom_weight)?),
            DistributionSpec::Uniform { lo, hi } => Box::new(Uniform::new(*lo, *hi)?),
            DistributionSpec::Pareto { shape, scale } => Box::new(Pareto::new(*shape, *scale)?),
            DistributionSpec::PowerDensity { exponent } => {
                Box::new(GenericDensity::power_law(*exponent)?)
            }
        })
    }

    /// The law as a finite atom list; only `finite` and `point` qualify.
    pub fn build_finite(&self) -> Result<FiniteDiscrete> {
        match self {
            DistributionSpec::Finite { atoms } => Ok(atoms.clone()),
            DistributionSpec::Point { value } => Ok(FiniteDiscrete::point(*value)),
            other => Err(Error::Spec(format!(
                "expected a finite law, got {}",
                other.kind_name()
            ))),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DistributionSpec::Cauchy { .. } => "cauchy",
            DistributionSpec::Finite { .. } => "finite",
            DistributionSpec::Point { .. } => "point",
            DistributionSpec::Ex01Nu { .. } => "ex01_nu",
            DistributionSpec::Ex01Gamma { .. } => "ex01_gamma",
            DistributionSpec::Ex01Mu { .. } => "ex01_mu",
            DistributionSpec::AtomUniform { .. } => "atom_uniform",
            DistributionSpec::Uniform { .. } => "uniform",
            DistributionSpec::Pareto { .. } => "pareto",
            DistributionSpec::PowerDensity { .. } => "power_density",
        }
    }
}
