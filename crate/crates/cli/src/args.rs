use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixcenter::rng::DEFAULT_SEED;

const AFTER_HELP: &str = "\
Randomized commands default to --seed 42; no seed is ever taken from the clock.
Output files without an explicit --out go to $MIXCENTER_OUT_DIR (default: the current directory).
Exit codes: 0 success, 1 domain error or failed check, 2 I/O, parse or usage error.";

#[derive(Debug, Parser)]
#[command(name = "mixcenter", version, about = "Centers of jointly and completely mixable distributions", after_help = AFTER_HELP)]
pub struct Cli {
    /// Output format for the command result.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact center interval of the standard Cauchy law.
    Interval {
        #[arg(long)]
        n: usize,
    },
    /// Numeric necessary bounds on the center (one law, or several with --marginals).
    Bounds(BoundsArgs),
    /// Dual bound D(c) at a center c.
    Dual(DualArgs),
    /// Decides whether finite marginals admit a joint mix with a given center.
    Feasible(FeasibleArgs),
    /// Enumerates all centers of finite marginals.
    Centers(CentersArgs),
    /// Draws rows with constant sum and writes CSV plus a metadata sidecar.
    Sample(SampleArgs),
    /// Runs an invariant suite on a sample file, fresh samples, a coupling or the geometric example.
    Verify(VerifyArgs),
    /// Emits the two exact geometric couplings with sums 0 and 1.
    Ex01(Ex01Args),
    /// Recomputes the anchored reference numbers and diffs them against stored expectations.
    Repro,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Number of coordinates.
    #[arg(long)]
    pub n: Option<usize>,
    /// JSON law shared by all n coordinates (default: standard Cauchy).
    #[arg(long, conflicts_with = "marginals")]
    pub marginal: Option<PathBuf>,
    /// JSON array of laws, one per coordinate.
    #[arg(long)]
    pub marginals: Option<PathBuf>,
    /// Window offset per marginal for --marginals (default 0.01/n).
    #[arg(long, requires = "marginals")]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DualArgs {
    /// Number of coordinates.
    #[arg(long)]
    pub n: usize,
    /// Per-coordinate center.
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    /// JSON law (default: standard Cauchy).
    #[arg(long)]
    pub marginal: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeasibleArgs {
    /// JSON array of finite laws.
    #[arg(long)]
    pub marginals: PathBuf,
    /// Per-coordinate center.
    #[arg(long, allow_negative_numbers = true)]
    pub center: f64,
    #[command(flatten)]
    pub lp: LpArgs,
}

#[derive(Debug, Args)]
pub struct CentersArgs {
    /// JSON array of finite laws.
    #[arg(long)]
    pub marginals: PathBuf,
    #[command(flatten)]
    pub lp: LpArgs,
}

#[derive(Debug, Args)]
pub struct LpArgs {
    /// Solve in exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
    /// Feasibility tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Exact-marginal Cauchy sampler.
    Mixer,
    /// Rows of a rearranged discretization of --marginal.
    Ra,
}

#[derive(Debug, Args)]
pub struct MixerArgs {
    /// Number of coordinates.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Per-coordinate center.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Rows to draw.
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    /// Master seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Quantile levels per column of the rearrangement tables.
    #[arg(long, default_value_t = 512)]
    pub ra_grid_m: usize,
    /// Mass of the mixing measure allowed beyond the last grid point.
    #[arg(long, default_value_t = 1e-4)]
    pub tail_eps: f64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub mixer: MixerArgs,
    /// Sampler to use.
    #[arg(long, value_enum, default_value_t = Engine::Mixer)]
    pub engine: Engine,
    /// JSON law for --engine ra (default: standard Cauchy).
    #[arg(long)]
    pub marginal: Option<PathBuf>,
    /// CSV path; the metadata goes next to it with extension .meta.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Sample CSV written by `sample`; its .meta.json sidecar must sit next to it.
    pub samples: Option<PathBuf>,
    #[command(flatten)]
    pub mixer: MixerArgs,
    /// Coupling JSON {support, weights} to check against --marginals and --center.
    #[arg(long, requires_all = ["marginals", "center"], conflicts_with_all = ["samples", "ex01"])]
    pub coupling: Option<PathBuf>,
    /// JSON array of finite laws for --coupling.
    #[arg(long)]
    pub marginals: Option<PathBuf>,
    /// Per-coordinate center for --coupling.
    #[arg(long, allow_negative_numbers = true)]
    pub center: Option<f64>,
    /// Tolerance for --coupling.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Check the geometric couplings truncated at this level.
    #[arg(long, value_name = "K", conflicts_with = "samples")]
    pub ex01: Option<u32>,
}

#[derive(Debug, Args)]
pub struct Ex01Args {
    /// Truncation level.
    #[arg(long = "K", visible_alias = "k", default_value_t = 20)]
    pub k: u32,
    /// Also write ex01_x.json and ex01_y.json into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
