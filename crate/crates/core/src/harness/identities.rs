//! Closed-form and distributional identities around the logistic law.

use super::{Cell, ExperimentConfig, HarnessError, Reference};
use crate::dists::{
    h_forms_sup_diff, h_mass_and_mean, logistic_cdf, logistic_sample, verify_2k_integral, verify_identity2, verify_min_identity,
    zeta3_mean, InitialLaw, MIN_VERIFY_POPULATION, PI2_OVER_6, ZETA3,
};
use crate::rde::{population_step, EmpiricalPopulation, RdeSpec, StepOptions};
use crate::rng::stream;
use crate::stats::ks_distance;

const STEP_POPULATION: usize = 100_000;
const CONVERGENCE_STEPS: usize = 50;
const Q_ORDERS: usize = 5;

pub fn run_identities(cfg: &ExperimentConfig) -> Result<Vec<Cell>, HarnessError> {
    let mut cells = Vec::new();
    let seed = cfg.seed;

    let (mass, mean) = h_mass_and_mean();
    cells.push(Cell::check(
        "h_mass".into(),
        mass,
        None,
        Reference::new(1.0, "limit density h integrates to 1"),
        (mass - 1.0).abs() < 1e-8,
    ));
    cells.push(Cell::check(
        "h_mean".into(),
        mean,
        None,
        Reference::new(PI2_OVER_6, "limit density h has mean pi^2/6"),
        (mean - PI2_OVER_6).abs() < 1e-6,
    ));
    let diff = h_forms_sup_diff(20.0, 0.01);
    cells.push(Cell::check(
        "h_closed_vs_convolution".into(),
        diff,
        None,
        Reference::new(0.0, "closed form of h equals P(X1 + X2 > x); sup over [0, 20] below 1e-6"),
        diff < 1e-6,
    ));
    let z3 = zeta3_mean();
    cells.push(Cell::check(
        "zeta3_mean".into(),
        z3,
        None,
        Reference::new(ZETA3, "zeta(3) companion density has mean zeta(3)"),
        (z3 - ZETA3).abs() < 1e-5,
    ));

    let n_step = STEP_POPULATION.min(cfg.pop_size).max(MIN_VERIFY_POPULATION);
    let mut rng = stream(seed, "identities/logistic-step", 0);
    let pop = EmpiricalPopulation::from_fn(n_step, &mut rng, logistic_sample)?;
    let next = population_step(&pop, &RdeSpec::assignment(), &mut rng)?;
    let ks = ks_distance(next.samples(), logistic_cdf);
    cells.push(Cell::check(
        "logistic_step_ks".into(),
        ks,
        None,
        Reference::new(0.01, "logistic law is the fixed point of X = min_i (xi_i - X_i)"),
        ks < 0.01,
    ));
    let ks = verify_min_identity(
        n_step,
        CONVERGENCE_STEPS,
        InitialLaw::StandardNormal,
        StepOptions::DAMPED,
        &mut stream(seed, "identities/normal-start", 0),
    )?;
    cells.push(Cell::check(
        "normal_start_ks".into(),
        ks,
        None,
        Reference::new(0.02, "iteration from a normal start reaches the logistic fixed point (half-mixed steps)"),
        ks < 0.02,
    ));
    let ks = verify_min_identity(
        n_step,
        CONVERGENCE_STEPS,
        InitialLaw::StandardNormal,
        StepOptions::PLAIN,
        &mut stream(seed, "identities/normal-start-plain", 0),
    )?;
    cells.push(Cell::reported(
        "normal_start_plain_ks".into(),
        ks,
        None,
        Some(Reference::new(0.0, "plain steps settle into a 2-cycle of shifted logistic laws")),
    ));

    let id2 = verify_identity2(cfg.pop_size, &mut stream(seed, "identities/identity2", 0))?;
    cells.push(Cell::check(
        "identity2_ks".into(),
        id2.ks,
        None,
        Reference::new(0.005, "X = min(X1, X2) + eta for logistic X"),
        id2.ks < 0.005,
    ));
    cells.push(Cell::z_test(
        "identity2_min_mean".into(),
        id2.min_mean,
        Reference::new(-1.0, "E min(X1, X2) = -1 forced by X = min(X1, X2) + eta"),
        cfg.z_max,
    ));

    let mut prev = None;
    for k in 1..=Q_ORDERS {
        let mut rng = stream(seed, "identities/q", k as u64);
        let q = verify_2k_integral(k, cfg.pop_size, &mut rng)?;
        cells.push(Cell::z_test(
            format!("q[k={k}]"),
            q,
            Reference::new(0.5f64.powi(k as i32), "integral identity Q(k) = 2^-k"),
            cfg.z_max,
        ));
        if let Some(p) = prev {
            cells.push(Cell::reported(
                format!("q_ratio[k={k}]"),
                q.mean / p,
                None,
                Some(Reference::new(0.5, "Q(k) = Q(k-1) / 2")),
            ));
        }
        prev = Some(q.mean);
    }
    Ok(cells)
}
