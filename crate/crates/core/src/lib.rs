//! Degrees-of-freedom analysis for the K-user MISO broadcast channel whose
//! transmitter knows each user's channel perfectly (P), with delay (D), or
//! not at all (N), alternating over time.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`rational`] and [`csit`]: exact probabilities, CSIT patterns and their
//!   marginal / joint statistics.
//! - [`region`] and [`bound`]: linear inequality systems over DoF space and
//!   the outer-bound polytope generated from per-user marginals.
//! - [`polytope`]: exact simplex, membership, redundancy removal and vertex
//!   enumeration.
//! - [`schemes`]: achievability schedules (zero forcing, MAT, hybrids) with
//!   exact DoF accounting and Monte Carlo decodability checks.
//! - [`pattern_analysis`]: joint-probability inequalities that separate
//!   patterns sharing the same marginals.
//!
//! ```
//! use altcsit_core::rational::{int, rat};
//! use altcsit_core::{build_region, lp_max, MarginalProfile};
//!
//! let m = MarginalProfile::symmetric(3, rat(2, 3), rat(1, 6)).unwrap();
//! let best = lp_max(&build_region(&m), &[int(1), int(1), int(1)]).unwrap();
//! assert_eq!(best.value(), Some(&rat(28, 11)));
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bound;
pub mod catalog;
pub mod csit;
mod error;
pub mod pattern_analysis;
pub mod polytope;
pub mod rational;
pub mod region;
pub mod schemes;

pub use bound::{
    build_region, build_symmetric_region, check_antennas, inequality_count, psi_order, sum_inequality,
    weighted_inequality, PermutationSpec,
};
pub use csit::{CsitPattern, CsitState, MarginalProfile, StateSet, UserMarginal};
pub use error::{Error, Result};
pub use pattern_analysis::{
    compare_regions, pattern_weighted_inequality, tightened_region, PatternInequalitySpec, RegionRelation, Separator,
};
pub use polytope::{contains, is_redundant, lp_max, pareto_vertices, remove_redundant, vertices, LpResult, Membership};
pub use rational::Rational;
pub use region::{ConstraintTag, DofPoint, LinearInequality, Region};
