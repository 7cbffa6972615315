//! Closed-form laws: the standard logistic distribution, the limit density
//! of matched edge costs, its minimum-spanning-tree companion, and Monte
//! Carlo checks of the distributional identities that tie them together.

mod limit;
mod logistic;
mod verify;

use thiserror::Error;

pub use limit::{h_alt, h_cdf, h_density, h_forms_sup_diff, h_mass_and_mean, zeta3_density, zeta3_mean, zeta3_q};
pub use logistic::{logistic_cdf, logistic_pdf, logistic_quantile, logistic_sample, logistic_survival};
pub use verify::{
    verify_2k_integral, verify_identity2, verify_min_identity, Identity2Outcome, InitialLaw,
    MIN_VERIFY_POPULATION,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistError {
    #[error("argument {0} must be nonnegative")]
    NegativeArgument(f64),
    #[error("population size {got} below minimum {min}")]
    PopulationTooSmall { got: usize, min: usize },
    #[error("order index k must be at least 1")]
    InvalidOrder,
    #[error(transparent)]
    Rde(#[from] crate::rde::RdeError),
}

pub const PI2_OVER_6: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
