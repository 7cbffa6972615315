//! Population dynamics for min-type and Gibbs recursive distributional
//! equations.
//!
//! One step replaces every sample by an independent draw of the recursion's
//! right-hand side: a realization of the point process, each point paired
//! with a value resampled uniformly from the current population, reduced by
//! the combiner.

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use super::RdeError;
use crate::rng::fork;

pub const MIN_POPULATION: usize = 1_000;
const CHUNK: usize = 4096;

/// Points `ξ_1 < ξ_2 < …` of the driving process.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum PointProcess {
    PoissonRate1,
    /// Intensity `x^r dx` on `(0, ∞)`.
    PoissonPowerLaw(f64),
}

impl PointProcess {
    /// Map the arrival time of a rate-1 process to a point of this process.
    #[inline]
    pub fn point(&self, arrival: f64) -> f64 {
        match *self {
            PointProcess::PoissonRate1 => arrival,
            PointProcess::PoissonPowerLaw(0.0) => arrival,
            PointProcess::PoissonPowerLaw(r) => ((r + 1.0) * arrival).powf(1.0 / (r + 1.0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Combiner {
    /// `min_i (ξ_i - X_i)`.
    Min,
    /// k-th smallest of `ξ_i - X_i`.
    KthMin(usize),
    /// `(Σ_i e^{-λ ξ_i} X_i)^{-1}` over positive samples.
    GibbsInverseSum(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RdeSpec {
    pub process: PointProcess,
    pub combiner: Combiner,
}

impl RdeSpec {
    pub fn new(process: PointProcess, combiner: Combiner) -> Result<Self, RdeError> {
        let spec = Self { process, combiner };
        spec.validate()?;
        Ok(spec)
    }

    pub fn assignment() -> Self {
        Self { process: PointProcess::PoissonRate1, combiner: Combiner::Min }
    }

    pub fn validate(&self) -> Result<(), RdeError> {
        if let PointProcess::PoissonPowerLaw(r) = self.process {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(RdeError::InvalidSpec(format!("power-law exponent {r} must be >= 0")));
            }
        }
        match self.combiner {
            Combiner::KthMin(0) => Err(RdeError::InvalidSpec("k must be >= 1".into())),
            Combiner::GibbsInverseSum(l) if !(l > 0.0 && l.is_finite()) => {
                Err(RdeError::InvalidSpec(format!("lambda {l} must be > 0")))
            }
            _ => Ok(()),
        }
    }
}

/// Samples standing in for a law, plus the number of steps applied so far.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPopulation {
    samples: Vec<f64>,
    generation: u64,
}

impl EmpiricalPopulation {
    pub fn new(samples: Vec<f64>) -> Result<Self, RdeError> {
        if samples.len() < MIN_POPULATION {
            return Err(RdeError::PopulationTooSmall { got: samples.len(), min: MIN_POPULATION });
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(RdeError::NonFinite);
        }
        Ok(Self { samples, generation: 0 })
    }

    pub fn from_fn<R: Rng>(n: usize, rng: &mut R, mut draw: impl FnMut(&mut R) -> f64) -> Result<Self, RdeError> {
        let samples = (0..n).map(|_| draw(rng)).collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Tuning for one population step.
///
/// `margin` is the stopping slack for min-type combiners. With slack 0 the
/// truncation is exact relative to the population: once `ξ - max(pool)`
/// exceeds the current k-th smallest value no later point can enter it.
///
/// `mix` is the fraction of slots that receive a fresh draw; the others are
/// resampled from the current pool, so the new law is
/// `mix * T(law) + (1 - mix) * law`. Both recursions commute with shifts up
/// to a sign (`T(X + c) = T(X) - c`, and `T(cX) = T(X) / c` for the Gibbs
/// one), so the plain step has a neutral direction with eigenvalue `-1` and
/// started off the fixed point it settles into a 2-cycle of shifted laws.
/// Mixing with weight 1/2 removes that direction and leaves the fixed points
/// unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub margin: f64,
    pub mix: f64,
}

impl StepOptions {
    /// Plain step: every slot is redrawn.
    pub const PLAIN: Self = Self { margin: 0.0, mix: 1.0 };
    /// Half-mixed step used by the fixed-point solvers.
    pub const DAMPED: Self = Self { margin: 0.0, mix: 0.5 };
}

impl Default for StepOptions {
    fn default() -> Self {
        Self::PLAIN
    }
}

pub fn population_step(
    pop: &EmpiricalPopulation,
    spec: &RdeSpec,
    rng: &mut impl Rng,
) -> Result<EmpiricalPopulation, RdeError> {
    population_step_with(pop, spec, StepOptions::default(), rng)
}

pub fn population_step_with(
    pop: &EmpiricalPopulation,
    spec: &RdeSpec,
    opts: StepOptions,
    rng: &mut impl Rng,
) -> Result<EmpiricalPopulation, RdeError> {
    spec.validate()?;
    if !(opts.mix > 0.0 && opts.mix <= 1.0) || !(opts.margin >= 0.0) {
        return Err(RdeError::InvalidSpec(format!("bad step options {opts:?}")));
    }
    let n = pop.samples.len();
    // sorting makes the step depend on the multiset only
    let pool = crate::stats::sorted(&pop.samples);
    let chunks = n.div_ceil(CHUNK);
    let streams: Vec<_> = (0..chunks as u64).map(|c| fork(rng, c)).collect();

    let mut out = vec![0.0; n];
    match spec.combiner {
        Combiner::Min => fill_kth_min(&pool, spec.process, 1, opts, streams, &mut out),
        Combiner::KthMin(k) => fill_kth_min(&pool, spec.process, k, opts, streams, &mut out),
        Combiner::GibbsInverseSum(lambda) => fill_gibbs(&pool, spec.process, lambda, opts.mix, streams, &mut out)?,
    }
    Ok(EmpiricalPopulation { samples: out, generation: pop.generation + 1 })
}

fn fill_kth_min(
    pool: &[f64],
    process: PointProcess,
    k: usize,
    opts: StepOptions,
    streams: Vec<crate::rng::Stream>,
    out: &mut [f64],
) {
    let n = pool.len();
    let max_x = pool[n - 1];
    let margin = opts.margin;
    out.par_chunks_mut(CHUNK).zip(streams).for_each(|(chunk, mut rng)| {
        let mut best: Vec<f64> = Vec::with_capacity(k + 1);
        for slot in chunk.iter_mut() {
            if kept(&mut rng, opts.mix) {
                *slot = pool[rng.random_range(0..n)];
                continue;
            }
            best.clear();
            let mut arrival = 0.0;
            loop {
                let e: f64 = rng.sample(Exp1);
                arrival += e;
                let xi = process.point(arrival);
                if best.len() == k && xi - max_x > best[k - 1] + margin {
                    break;
                }
                let v = xi - pool[rng.random_range(0..n)];
                if best.len() < k || v < best[k - 1] {
                    let pos = best.partition_point(|&b| b <= v);
                    best.insert(pos, v);
                    best.truncate(k);
                }
            }
            *slot = best[k - 1];
        }
    });
}

fn fill_gibbs(
    pool: &[f64],
    process: PointProcess,
    lambda: f64,
    mix: f64,
    streams: Vec<crate::rng::Stream>,
    out: &mut [f64],
) -> Result<(), RdeError> {
    if pool[0] <= 0.0 {
        return Err(RdeError::InvalidSpec("Gibbs recursion needs strictly positive samples".into()));
    }
    let n = pool.len();
    let ln_pool: Vec<f64> = pool.iter().map(|x| x.ln()).collect();
    let ln_max = ln_pool[n - 1];
    // expected remainder after a point at ξ is at most max(X) e^{-λξ} / λ
    let ln_tail = (1.0 + 1.0 / lambda).ln();
    let ln_rel = (1e-16f64).ln();
    let failed = std::sync::atomic::AtomicBool::new(false);
    out.par_chunks_mut(CHUNK).zip(streams).for_each(|(chunk, mut rng)| {
        for slot in chunk.iter_mut() {
            if kept(&mut rng, mix) {
                *slot = pool[rng.random_range(0..n)];
                continue;
            }
            let mut arrival = 0.0;
            let mut m = f64::NEG_INFINITY;
            let mut s = 0.0f64;
            loop {
                let e: f64 = rng.sample(Exp1);
                arrival += e;
                let decay = -lambda * process.point(arrival);
                if m.is_finite() && decay + ln_max + ln_tail < ln_rel + m + s.ln() {
                    break;
                }
                let t = decay + ln_pool[rng.random_range(0..n)];
                if t > m {
                    s = s * (m - t).exp() + 1.0;
                    m = t;
                } else {
                    s += (t - m).exp();
                }
            }
            let x = (-(m + s.ln())).exp();
            if !(x > 0.0 && x.is_finite()) {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
            }
            *slot = x;
        }
    });
    if failed.into_inner() {
        return Err(RdeError::GibbsOverflow);
    }
    Ok(())
}

#[inline]
fn kept(rng: &mut impl Rng, mix: f64) -> bool {
    mix < 1.0 && rng.random::<f64>() >= mix
}

/// Apply `steps` population steps, calling `observe` after each one.
pub fn iterate(
    mut pop: EmpiricalPopulation,
    spec: &RdeSpec,
    opts: StepOptions,
    steps: usize,
    rng: &mut impl Rng,
    mut observe: impl FnMut(&EmpiricalPopulation),
) -> Result<EmpiricalPopulation, RdeError> {
    for _ in 0..steps {
        pop = population_step_with(&pop, spec, opts, rng)?;
        observe(&pop);
    }
    Ok(pop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{logistic_cdf, logistic_sample};
    use crate::rng::stream;
    use crate::stats::ks_distance;

    fn logistic_pop(n: usize, seed: u64) -> EmpiricalPopulation {
        EmpiricalPopulation::from_fn(n, &mut stream(seed, "pop-init", 0), logistic_sample).unwrap()
    }

    #[test]
    fn rejects_small_or_nonfinite() {
        assert!(matches!(EmpiricalPopulation::new(vec![0.0; 10]), Err(RdeError::PopulationTooSmall { .. })));
        let mut v = vec![0.0; 2000];
        v[5] = f64::NAN;
        assert_eq!(EmpiricalPopulation::new(v), Err(RdeError::NonFinite));
    }

    #[test]
    fn spec_validation() {
        assert!(RdeSpec::new(PointProcess::PoissonPowerLaw(-1.0), Combiner::Min).is_err());
        assert!(RdeSpec::new(PointProcess::PoissonRate1, Combiner::KthMin(0)).is_err());
        assert!(RdeSpec::new(PointProcess::PoissonRate1, Combiner::GibbsInverseSum(0.0)).is_err());
        assert!(RdeSpec::new(PointProcess::PoissonPowerLaw(1.0), Combiner::KthMin(2)).is_ok());
    }

    #[test]
    fn power_law_process_intensity() {
        // intensity x dx: the first point has P(ξ1 > t) = exp(-t^2 / 2)
        let p = PointProcess::PoissonPowerLaw(1.0);
        let mut rng = stream(3, "pp", 0);
        let xs: Vec<f64> = (0..100_000).map(|_| p.point(rng.sample::<f64, _>(Exp1))).collect();
        assert!(ks_distance(&xs, |t| 1.0 - (-t * t / 2.0).exp()) < 0.01);
    }

    #[test]
    fn generation_counts_and_size_kept() {
        let pop = logistic_pop(5000, 1);
        let next = population_step(&pop, &RdeSpec::assignment(), &mut stream(1, "s", 0)).unwrap();
        assert_eq!(next.generation(), 1);
        assert_eq!(next.len(), 5000);
    }

    #[test]
    fn logistic_is_preserved() {
        let pop = logistic_pop(100_000, 2);
        let next = population_step(&pop, &RdeSpec::assignment(), &mut stream(2, "s", 0)).unwrap();
        let d = ks_distance(next.samples(), logistic_cdf);
        assert!(d < 0.01, "KS {d}");
    }

    #[test]
    fn kth_min_one_is_min() {
        let pop = logistic_pop(5000, 3);
        let a = population_step(&pop, &RdeSpec::assignment(), &mut stream(3, "s", 0)).unwrap();
        let spec = RdeSpec::new(PointProcess::PoissonRate1, Combiner::KthMin(1)).unwrap();
        let b = population_step(&pop, &spec, &mut stream(3, "s", 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn order_of_input_is_irrelevant() {
        let pop = logistic_pop(5000, 4);
        let mut rev = pop.samples().to_vec();
        rev.reverse();
        let rev = EmpiricalPopulation::new(rev).unwrap();
        let a = population_step(&pop, &RdeSpec::assignment(), &mut stream(4, "s", 0)).unwrap();
        let b = population_step(&rev, &RdeSpec::assignment(), &mut stream(4, "s", 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gibbs_outputs_positive() {
        let lambda = 3.0;
        let pop = EmpiricalPopulation::from_fn(5000, &mut stream(5, "g", 0), |r| {
            (-lambda * logistic_sample(r)).exp()
        })
        .unwrap();
        let spec = RdeSpec::new(PointProcess::PoissonRate1, Combiner::GibbsInverseSum(lambda)).unwrap();
        let next = population_step(&pop, &spec, &mut stream(5, "s", 0)).unwrap();
        assert!(next.samples().iter().all(|&x| x > 0.0 && x.is_finite()));
    }

    #[test]
    fn gibbs_rejects_nonpositive_pool() {
        let pop = logistic_pop(2000, 6);
        let spec = RdeSpec::new(PointProcess::PoissonRate1, Combiner::GibbsInverseSum(1.0)).unwrap();
        assert!(population_step(&pop, &spec, &mut stream(6, "s", 0)).is_err());
    }

    #[test]
    fn margin_does_not_change_the_law() {
        let pop = logistic_pop(20_000, 7);
        let spec = RdeSpec::assignment();
        let a = population_step(&pop, &spec, &mut stream(7, "s", 0)).unwrap();
        let b = population_step_with(&pop, &spec, StepOptions { margin: 40.0, ..StepOptions::PLAIN }, &mut stream(7, "s", 0)).unwrap();
        // same stream, but the wider margin consumes extra draws; compare laws
        let d = crate::stats::ks_two_sample(a.samples(), b.samples());
        assert!(d < 0.03, "two-sample KS {d}");
    }

    fn median(xs: &[f64]) -> f64 {
        crate::stats::sorted(xs)[xs.len() / 2]
    }

    #[test]
    fn plain_step_from_normal_start_settles_into_two_cycle() {
        let mut rng = stream(8, "init", 0);
        let pop = EmpiricalPopulation::from_fn(50_000, &mut rng, |r| r.sample(rand_distr::StandardNormal)).unwrap();
        let mut meds = Vec::new();
        iterate(pop, &RdeSpec::assignment(), StepOptions::PLAIN, 40, &mut stream(8, "s", 0), |p| {
            meds.push(median(p.samples()))
        })
        .unwrap();
        let (a, b) = (meds[38], meds[39]);
        assert!(a.abs() > 0.25 && b.abs() > 0.25, "medians {a} {b}");
        assert!((a + b).abs() < 0.1, "medians {a} {b}");
    }

    #[test]
    fn damped_step_from_normal_start_reaches_logistic() {
        let mut rng = stream(9, "init", 0);
        let pop = EmpiricalPopulation::from_fn(50_000, &mut rng, |r| r.sample(rand_distr::StandardNormal)).unwrap();
        let out = iterate(pop, &RdeSpec::assignment(), StepOptions::DAMPED, 40, &mut stream(9, "s", 0), |_| {}).unwrap();
        let d = ks_distance(out.samples(), logistic_cdf);
        assert!(d < 0.02, "KS {d}");
    }

    #[test]
    fn rejects_bad_mix() {
        let pop = logistic_pop(2000, 10);
        let opts = StepOptions { margin: 0.0, mix: 0.0 };
        assert!(population_step_with(&pop, &RdeSpec::assignment(), opts, &mut stream(10, "s", 0)).is_err());
    }
}
