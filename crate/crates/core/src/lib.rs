//! Centers of completely and jointly mixable distributions.
//!
//! * [`distributions`]: one-dimensional laws with quantiles, cdfs and samplers.
//! * [`center_bounds`]: necessary conditions on centers and the exact Cauchy
//!   interval.
//! * [`cauchy_mix`]: a sampler of `n` standard Cauchy variates whose sum is the
//!   constant `n c`, for every admissible `c`.
//! * [`discrete_mix`]: feasibility and enumeration of centers for finite
//!   marginals, plus explicit couplings.
//! * [`rearrangement`]: the rearrangement algorithm on discretized marginals.
//! * [`verify`]: goodness-of-fit statistics and the invariant suite.

// `!(x <= y)` rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cauchy_mix;
pub mod center_bounds;
pub mod discrete_mix;
pub mod distributions;
pub mod error;
pub mod quadrature;
pub mod rearrangement;
pub mod rng;
pub mod roots;
pub mod verify;

pub use center_bounds::{CenterInterval, IntervalKind};
pub use discrete_mix::{CenterSet, Coupling};
pub use distributions::{Distribution, DistributionSpec, MeanStatus};
pub use error::{Error, Result};
pub use rearrangement::QuantileMatrix;
pub use verify::VerificationReport;
