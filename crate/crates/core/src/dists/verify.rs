//! Monte Carlo checks of the distributional identities behind the logistic
//! fixed point.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::logistic::{logistic_cdf, logistic_sample};
use super::DistError;
use crate::rde::{iterate, EmpiricalPopulation, RdeSpec, StepOptions};
use crate::stats::{ks_distance, MeanStderr};

pub const MIN_VERIFY_POPULATION: usize = 10_000;

/// Starting law for the min-recursion iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialLaw {
    Logistic,
    StandardNormal,
    /// Point mass.
    Degenerate(f64),
}

impl InitialLaw {
    fn draw(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            InitialLaw::Logistic => logistic_sample(rng),
            InitialLaw::StandardNormal => rng.sample(StandardNormal),
            InitialLaw::Degenerate(v) => v,
        }
    }
}

/// Iterate `X' = min_i (ξ_i - X_i)` `iters` times from `init` and return the
/// KS distance of the result to the logistic law.
///
/// With `StepOptions::PLAIN` a non-logistic start ends in a 2-cycle of
/// shifted logistic laws; use `StepOptions::DAMPED` to reach the fixed point.
pub fn verify_min_identity(
    pop_size: usize,
    iters: usize,
    init: InitialLaw,
    opts: StepOptions,
    rng: &mut impl Rng,
) -> Result<f64, DistError> {
    if pop_size < MIN_VERIFY_POPULATION {
        return Err(DistError::PopulationTooSmall { got: pop_size, min: MIN_VERIFY_POPULATION });
    }
    let pop = EmpiricalPopulation::from_fn(pop_size, rng, |r| init.draw(r)).expect("size checked above");
    let out = iterate(pop, &RdeSpec::assignment(), opts, iters, rng, |_| {})?;
    Ok(ks_distance(out.samples(), logistic_cdf))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Identity2Outcome {
    /// KS distance of `min(X1, X2) + η` to the logistic law.
    pub ks: f64,
    /// Mean of `min(X1, X2)`, which the identity forces to -1.
    pub min_mean: MeanStderr,
}

/// Sample `min(X1, X2) + η` with X logistic and η ~ Exp(1).
pub fn verify_identity2(pop_size: usize, rng: &mut impl Rng) -> Result<Identity2Outcome, DistError> {
    if pop_size < MIN_VERIFY_POPULATION {
        return Err(DistError::PopulationTooSmall { got: pop_size, min: MIN_VERIFY_POPULATION });
    }
    let mut mins = Vec::with_capacity(pop_size);
    let mut out = Vec::with_capacity(pop_size);
    for _ in 0..pop_size {
        let m = logistic_sample(rng).min(logistic_sample(rng));
        let eta: f64 = rng.sample(Exp1);
        mins.push(m);
        out.push(m + eta);
    }
    Ok(Identity2Outcome { ks: ks_distance(&out, logistic_cdf), min_mean: MeanStderr::from_slice(&mins) })
}

// Logistic draws below -40 have probability ~4e-18.
const LOGISTIC_FLOOR_MARGIN: f64 = 40.0;

/// Monte Carlo estimate of `Q(k) = E(min_i(ξ_i + X_i) - (ξ_k + X))^+`, which
/// equals `2^{-k}`.
pub fn verify_2k_integral(k: usize, pop_size: usize, rng: &mut impl Rng) -> Result<MeanStderr, DistError> {
    if k == 0 {
        return Err(DistError::InvalidOrder);
    }
    if pop_size < MIN_VERIFY_POPULATION {
        return Err(DistError::PopulationTooSmall { got: pop_size, min: MIN_VERIFY_POPULATION });
    }
    let mut terms = Vec::with_capacity(pop_size);
    for _ in 0..pop_size {
        let x = logistic_sample(rng);
        let mut xi = 0.0;
        let mut xi_k = 0.0;
        let mut best = f64::INFINITY;
        let mut i = 0usize;
        loop {
            let e: f64 = rng.sample(Exp1);
            xi += e;
            i += 1;
            if i > k && xi - LOGISTIC_FLOOR_MARGIN > best {
                break;
            }
            if i == k {
                xi_k = xi;
            }
            best = best.min(xi + logistic_sample(rng));
        }
        terms.push((best - (xi_k + x)).max(0.0));
    }
    Ok(MeanStderr::from_slice(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn guards() {
        let mut rng = stream(0, "g", 0);
        assert!(verify_min_identity(100, 1, InitialLaw::Logistic, StepOptions::PLAIN, &mut rng).is_err());
        assert!(verify_identity2(100, &mut rng).is_err());
        assert_eq!(verify_2k_integral(0, 20_000, &mut rng), Err(DistError::InvalidOrder));
    }

    #[test]
    fn identity2_mean_of_min() {
        let out = verify_identity2(200_000, &mut stream(1, "id2", 0)).unwrap();
        assert!(out.min_mean.z(-1.0).abs() < 3.0, "{:?}", out.min_mean);
        assert!(out.ks < 0.01);
    }

    #[test]
    fn identity2_symmetric_in_seed() {
        // two independent runs land within Monte Carlo noise of each other
        let a = verify_identity2(100_000, &mut stream(2, "id2", 0)).unwrap();
        let b = verify_identity2(100_000, &mut stream(2, "id2", 1)).unwrap();
        assert!((a.ks - b.ks).abs() < 0.01);
    }

    #[test]
    fn q1_is_half_and_ratios_halve() {
        let mut rng = stream(3, "q", 0);
        let q: Vec<MeanStderr> = (1..=3).map(|k| verify_2k_integral(k, 100_000, &mut rng).unwrap()).collect();
        // several z-scores per run, so allow 4 stderr here
        assert!(q[0].z(0.5).abs() < 4.0, "{:?}", q[0]);
        assert!(q[2].z(0.125).abs() < 4.0, "{:?}", q[2]);
        let ratio = q[1].mean / q[0].mean;
        assert!((ratio - 0.5).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn logistic_start_stays_logistic() {
        let ks = verify_min_identity(100_000, 1, InitialLaw::Logistic, StepOptions::PLAIN, &mut stream(4, "mi", 0)).unwrap();
        assert!(ks < 0.01, "KS {ks}");
    }

    #[test]
    fn degenerate_start_converges_when_damped() {
        let init = InitialLaw::Degenerate(0.0);
        let ks = verify_min_identity(20_000, 50, init, StepOptions::DAMPED, &mut stream(5, "mi", 0)).unwrap();
        assert!(ks < 0.02, "KS {ks}");
    }

    #[test]
    fn degenerate_start_cycles_when_plain() {
        // the limit cycle is logistic shifted by about +-0.6, sup distance ~0.15
        let init = InitialLaw::Degenerate(0.0);
        let ks = verify_min_identity(20_000, 50, init, StepOptions::PLAIN, &mut stream(5, "mi", 0)).unwrap();
        assert!(ks > 0.1, "KS {ks}");
    }
}
