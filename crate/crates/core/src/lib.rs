//! Numerical laboratory for the mean-field random assignment problem.
//!
//! * [`assignment`]: finite-n exact solving and the brute-force oracle.
//! * [`pwit`]: depth-truncated Poisson-weighted infinite trees, the
//!   X-recursion and the optimal tree matching.
//! * [`dists`]: the logistic law, the limit edge-cost density and companions.
//! * [`rde`]: grid and population-dynamics solvers for the fixed-point
//!   equations of the power-law, TSP and Gibbs variants.
//! * [`harness`]: experiment orchestration and reports.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod dists;
pub mod harness;
pub mod pwit;
pub mod quad;
pub mod rde;
pub mod rng;
pub mod stats;
