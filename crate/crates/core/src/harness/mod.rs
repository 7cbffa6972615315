//! Seeded experiments that compare Monte Carlo and numerical estimates with
//! the exact and limiting results they are meant to reproduce.
//!
//! Every replicate draws from its own stream keyed by `(seed, cell tag,
//! replicate index)` and results are reduced in replicate order, so a report
//! depends only on its configuration.

mod finite;
mod fixed_point;
mod identities;
mod report;
mod tree;

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::AssignmentError;
use crate::dists::DistError;
use crate::pwit::{Boundary, PwitError};
use crate::rde::RdeError;

pub use finite::{run_aeu, run_edge_density, run_rank_dist, run_zeta2};
pub use fixed_point::{run_gibbs, run_powerlaw, run_tsp};
pub use identities::run_identities;
pub use report::{Cell, Reference, Report, CSV_HEADER};
pub use tree::run_pwit;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Assignment(#[from] AssignmentError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Pwit(#[from] PwitError),
    #[error(transparent)]
    Rde(#[from] RdeError),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Zeta2,
    EdgeDensity,
    RankDist,
    Aeu,
    Pwit,
    PowerLaw,
    Tsp,
    Gibbs,
    Identities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub reps: usize,
    pub n: Vec<usize>,
    pub depth: usize,
    pub width: usize,
    /// Explicit depth of each tree; `None` picks the deepest core within the
    /// vertex budget.
    pub core_depth: Option<usize>,
    pub boundary: Boundary,
    pub r: Vec<f64>,
    pub lambda: Vec<f64>,
    pub deltas: Vec<f64>,
    pub pop_size: usize,
    pub steps: usize,
    pub average_last: usize,
    pub grid_step: f64,
    /// Pass line for z-tests.
    pub z_max: f64,
    /// Tree snapshot of the first replicate (pwit only).
    pub snapshot: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    /// Defaults for `experiment`; the seed is always explicit.
    pub fn new(experiment: Experiment, seed: u64) -> Self {
        use Experiment::*;
        let reps = match experiment {
            Zeta2 | EdgeDensity | RankDist => 10_000,
            Aeu | Pwit => 1_000,
            PowerLaw | Tsp | Gibbs | Identities => 1,
        };
        let n = match experiment {
            Zeta2 => vec![1, 2, 3, 5, 10, 50, 100],
            EdgeDensity | RankDist | Pwit => vec![200],
            Aeu => vec![100],
            _ => Vec::new(),
        };
        let pop_size = if experiment == Identities { 1_000_000 } else { 100_000 };
        Self {
            experiment,
            seed,
            reps,
            n,
            depth: 12,
            width: 30,
            core_depth: None,
            boundary: Boundary::LogisticIid,
            r: vec![0.0, 0.5, 1.0],
            lambda: vec![1.0, 5.0, 20.0],
            deltas: vec![0.0, 0.1, 0.25, 0.5],
            pop_size,
            steps: 200,
            average_last: 50,
            grid_step: 0.01,
            z_max: 3.0,
            snapshot: None,
            out: None,
            format: Format::Csv,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if !(self.z_max > 0.0) {
            return bad(format!("z threshold {} must be positive", self.z_max));
        }
        use Experiment::*;
        match self.experiment {
            Zeta2 | RankDist | Aeu if self.n.is_empty() || self.n.contains(&0) => {
                bad("n list must be nonempty and positive".into())
            }
            EdgeDensity | Pwit if self.n.is_empty() || self.n.iter().any(|&n| n < 50) => {
                bad("n list must be nonempty with every n >= 50".into())
            }
            Aeu if self.deltas.is_empty() || self.deltas.iter().any(|d| !(0.0..=1.0).contains(d)) => {
                bad("deltas must be a nonempty list in [0, 1]".into())
            }
            Pwit if self.depth == 0 || self.width == 0 => bad("depth and width must be at least 1".into()),
            Pwit if self.core_depth.is_some_and(|c| c < 2 || c > self.depth) => {
                bad("core depth must lie in 2..=depth so that the root is determinate".into())
            }
            PowerLaw if self.r.is_empty() || self.r.iter().any(|r| !(*r >= 0.0)) => {
                bad("r list must be nonempty and nonnegative".into())
            }
            Gibbs if self.lambda.is_empty() || self.lambda.iter().any(|l| !(*l > 0.0)) => {
                bad("lambda list must be nonempty and positive".into())
            }
            PowerLaw | Tsp | Gibbs if self.steps == 0 || self.average_last == 0 || self.average_last > self.steps => {
                bad("need 1 <= average_last <= steps".into())
            }
            _ => Ok(()),
        }
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let (cells, solvers) = match cfg.experiment {
        Experiment::Zeta2 => (run_zeta2(cfg)?, Vec::new()),
        Experiment::EdgeDensity => (run_edge_density(cfg)?, Vec::new()),
        Experiment::RankDist => (run_rank_dist(cfg)?, Vec::new()),
        Experiment::Aeu => (run_aeu(cfg)?, Vec::new()),
        Experiment::Pwit => (run_pwit(cfg)?, Vec::new()),
        Experiment::PowerLaw => run_powerlaw(cfg)?,
        Experiment::Tsp => run_tsp(cfg)?,
        Experiment::Gibbs => (run_gibbs(cfg)?, Vec::new()),
        Experiment::Identities => (run_identities(cfg)?, Vec::new()),
    };
    Ok(Report { config: cfg.clone(), cells, solvers, runtime_seconds: start.elapsed().as_secs_f64() })
}

/// Run `reps` replicates in parallel and return their results in replicate
/// order.
pub(crate) fn replicate<T: Send>(
    reps: usize,
    f: impl Fn(u64) -> Result<T, HarnessError> + Sync + Send,
) -> Result<Vec<T>, HarnessError> {
    (0..reps as u64).into_par_iter().map(f).collect()
}

/// Binomial frequency with the standard error under the reference
/// probability.
pub(crate) fn frequency_cell(cell: String, hits: usize, total: usize, reference: Reference, z_max: f64) -> Cell {
    let p = reference.value;
    let freq = hits as f64 / total as f64;
    let stderr = (p * (1.0 - p) / total as f64).sqrt();
    let z = (freq - p) / stderr;
    Cell { cell, estimate: freq, stderr: Some(stderr), z: Some(z), pass: Some(z.abs() <= z_max), reference: Some(reference) }
}
