//! Exact and numerical machinery for polynomial-scale ("slow") entropy and
//! dimension quantities of one-sided symbolic systems: Caratheodory cover
//! optimization over Bowen balls, Hausdorff and upper box dimension in the
//! cylinder metric, measure-theoretic slow entropy, a constructive mass
//! distribution builder, and experiment orchestration around them.

pub mod cover;
pub mod dims;
pub mod error;
pub mod lattice;
pub mod measures;
pub mod scalar;
pub mod subsets;
pub mod tree;

pub mod cli;
pub mod config;
pub mod report;

pub use error::{Error, Result};
pub use scalar::{CoverScalar, Radical, SRatio};

/// Exact scalar backend: comparisons and sums of ball weights are decided in
/// exact arithmetic.
pub type ExactValue = Radical;

/// Fast scalar backend used for schedule sweeps and exponent bisection.
pub type ApproxValue = f64;
