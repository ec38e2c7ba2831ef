//! Quantized sparse ReLU networks, Bayes-set approximating constructions,
//! Tsybakov-noise distributions and seeded rate experiments.
//!
//! Module map:
//! - [`nn`]: networks on the dyadic weight grid, composition calculus, class enumeration
//! - [`sets`]: boundary fragment sets and the explicit indicator-network construction
//! - [`dist`]: synthetic distributions, quadrature, metrics and lower-bound family
//! - [`erm`]: empirical risk and its minimizers
//! - [`harness`]: replicated experiments and slope fitting

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x >= 0.0)` also rejects NaN

pub mod dist;
pub mod erm;
pub mod error;
pub mod harness;
pub mod nn;
pub mod par;
pub mod rng;
pub mod sets;
pub mod stats;

pub use error::{Error, Result};

/// Tolerance used for membership tests and general float comparisons.
pub const TOL: f64 = 1e-9;
