//! Gibbs measures at inverse temperature λ (heuristic): the inverse-sum
//! recursion `X = (Σ_i e^{-λ ξ_i} X_i)^{-1}` and the induced edge density
//! `h_λ(x) = 1 - E[1 / (1 + X1 X2 e^{-λx})]`.

use rand::Rng;

use super::{EmpiricalPopulation, RdeError};
use crate::dists::{logistic_cdf, logistic_sample};

/// Start at `X = e^{-λU}` with U logistic, the zero-temperature solution.
pub fn gibbs_initial_population(
    lambda: f64,
    pop_size: usize,
    rng: &mut impl Rng,
) -> Result<EmpiricalPopulation, RdeError> {
    EmpiricalPopulation::from_fn(pop_size, rng, |r| (-lambda * logistic_sample(r)).exp())
}

/// `h_λ` evaluated over a fixed set of resampled pairs, so that values at
/// different x share their randomness.
#[derive(Debug, Clone)]
pub struct GibbsDensity {
    lambda: f64,
    log_products: Vec<f64>,
}

impl GibbsDensity {
    pub fn new(lambda: f64, pop: &EmpiricalPopulation, pairs: usize, rng: &mut impl Rng) -> Self {
        let s = pop.samples();
        let n = s.len();
        let log_products = (0..pairs)
            .map(|_| s[rng.random_range(0..n)].ln() + s[rng.random_range(0..n)].ln())
            .collect();
        Self { lambda, log_products }
    }

    /// `1 - mean 1 / (1 + X1 X2 e^{-λx})`, i.e. the mean of
    /// `sigmoid(ln X1 + ln X2 - λx)`.
    pub fn h(&self, x: f64) -> f64 {
        let sum: f64 = self.log_products.iter().map(|&lp| logistic_cdf(lp - self.lambda * x)).sum();
        sum / self.log_products.len() as f64
    }
}

pub fn gibbs_h_lambda(lambda: f64, pop: &EmpiricalPopulation, x: f64, pairs: usize, rng: &mut impl Rng) -> f64 {
    GibbsDensity::new(lambda, pop, pairs, rng).h(x)
}
