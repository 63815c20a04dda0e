//! Joint mixes of finitely supported marginals.
//!
//! A joint mix with center `C` is a coupling supported on tuples whose
//! coordinate sum is `C`. For finite marginals this is a transportation
//! feasibility problem on the sum-slice, decided here by a phase-1 simplex
//! that returns either a coupling or a Farkas vector. The module also holds
//! the explicit couplings of the geometric example with two centers and the
//! exact symmetrization of a coupling.

mod coupling;
mod ex01;
mod feasibility;
mod permute;
mod simplex;

pub use coupling::Coupling;
pub use ex01::{ex01_center_two_excluded, ex01_couplings, CenterTwoExclusion, Ex01Couplings};
pub use feasibility::{
    enumerate_centers, lp_feasible_center, CenterSet, FarkasCertificate, FeasibilityOptions,
    Verdict, MAX_EXACT_VARIABLES, MAX_VARIABLES,
};
pub use permute::{
    exchangeable_permute, exchangeable_sample, symmetrized_marginal_exact, MAX_EXACT_N,
};
pub use simplex::{exact_rational, phase_one, LpScalar, PhaseOne};
