//! Sampler of `n` standard Cauchy variates with constant sum `n c`.
//!
//! For `0 < c <= ln(n-1)/π` the joint law is a mixture over `t > 0` of
//! component laws `μ_t`, each an atom at `c - t`, an atom at `c + (n-1)t`
//! and a uniform piece on `[c - t, K3(t)]`, all with mean `c`. The mixing
//! measure `Q` has a closed-form cdf. Each `μ_t` splits into a two-point law
//! with an exact cyclic coupling and an atom-plus-uniform law coupled by a
//! cached rearrangement table. `c = 0` mixes centered uniforms and `c < 0`
//! negates the mixer for `-c`.

mod admissibility;
mod density;
mod hfun;
mod kernel;
mod mixer;
mod tables;
mod tmeasure;

pub use admissibility::{generic_admissibility, Admissibility};
pub use density::{StdCauchy, UnimodalDensity};
pub use hfun::HFunction;
pub use kernel::{HPoint, MixKernel, MuTComponents};
pub use mixer::{
    cauchy_center_limit, convex_interpolate_mixes, Branch, ConvexMix, MixMetadata, MixRow,
    MixSampler, MixSamples, Mixer, MixerConfig, ROW_BLOCK,
};
pub use tables::{level_value, CouplingTable, CouplingTables, ALPHA_BINS};
pub use tmeasure::{build_t_grid, TGrid, TMeasure, T_MIN};
