//! Fixed-point solvers for the recursive distributional equations of the
//! assignment problem and its variants: power-law costs, the mean-field TSP
//! (second minimum), k-th minimum, and the Gibbs inverse-sum recursion.
//!
//! Where an equation has both an integral form and a distributional form it
//! is solved both ways, on a grid and by population dynamics.

mod gibbs;
mod grid;
mod population;
mod power_law;
mod report;
mod tsp;

use thiserror::Error;

pub use gibbs::{gibbs_h_lambda, gibbs_initial_population, GibbsDensity};
pub use grid::{GridFunction, GridParams, GridSolution, TailModel};
pub use population::{
    iterate, population_step, population_step_with, Combiner, EmpiricalPopulation, PointProcess,
    RdeSpec, StepOptions, MIN_POPULATION,
};
pub use power_law::{gamma_r, gamma_r_population, solve_power_law_grid};
pub use report::SolverReport;
pub use tsp::{solve_tsp_grid, tsp_constant, tsp_constant_population, tsp_integral};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RdeError {
    #[error("invalid recursion spec: {0}")]
    InvalidSpec(String),
    #[error("population size {got} below minimum {min}")]
    PopulationTooSmall { got: usize, min: usize },
    #[error("population contains non-finite samples")]
    NonFinite,
    #[error("inverse sum left the floating-point range")]
    GibbsOverflow,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no convergence after {iterations} iterations, residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
}

/// Mean over generations of a per-generation estimate, with the stderr of a
/// single generation. Generations share their pool, so the single-generation
/// stderr is the conservative choice.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PopulationEstimate {
    pub value: f64,
    pub stderr: f64,
    pub generations: usize,
}

/// `E[((X1 + X2)^+)^p] / p` over the pairs `(x_i, x_{i + N/2})`, with stderr.
pub(crate) fn positive_part_moment(samples: &[f64], p: f64) -> crate::stats::MeanStderr {
    let half = samples.len() / 2;
    let terms: Vec<f64> = (0..half)
        .map(|i| {
            let s = samples[i] + samples[i + half];
            if s > 0.0 {
                s.powf(p) / p
            } else {
                0.0
            }
        })
        .collect();
    crate::stats::MeanStderr::from_slice(&terms)
}

/// Run `steps` generations and average `p`-th positive-part moments over the
/// last `average_last`.
pub(crate) fn averaged_moment(
    initial: EmpiricalPopulation,
    spec: &RdeSpec,
    steps: usize,
    average_last: usize,
    p: f64,
    rng: &mut impl rand::Rng,
) -> Result<(PopulationEstimate, EmpiricalPopulation), RdeError> {
    let mut values = Vec::new();
    let mut errs = Vec::new();
    let start = steps.saturating_sub(average_last);
    let mut gen = 0usize;
    let last = iterate(initial, spec, StepOptions::DAMPED, steps, rng, |pop| {
        if gen >= start {
            let m = positive_part_moment(pop.samples(), p);
            values.push(m.mean);
            errs.push(m.stderr);
        }
        gen += 1;
    })?;
    let k = values.len().max(1) as f64;
    let value = crate::stats::neumaier_sum(values.iter().copied()) / k;
    let stderr = errs.iter().copied().fold(0.0, f64::max);
    Ok((PopulationEstimate { value, stderr, generations: values.len() }, last))
}
