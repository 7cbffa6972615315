use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rap_lab::harness::{self, Experiment, ExperimentConfig, Format, HarnessError};
use rap_lab::pwit::Boundary;

/// Run one seeded experiment and write a pass/fail report.
///
/// Exit status: 0 when every cell with a pass line passes, 1 when one fails,
/// 2 on a usage or runtime error.
#[derive(Debug, Parser)]
#[command(name = "rap-lab", version)]
struct Cli {
    experiment: Experiment,
    /// Master seed; every replicate derives its own stream from it.
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    reps: Option<usize>,
    /// Problem sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Tree depth (pwit).
    #[arg(long)]
    depth: Option<usize>,
    /// Children kept per vertex (pwit).
    #[arg(long)]
    width: Option<usize>,
    /// Levels sampled explicitly; deeper levels use the frontier law (pwit).
    #[arg(long)]
    core_depth: Option<usize>,
    #[arg(long, value_enum)]
    boundary: Option<BoundaryArg>,
    /// Power-law exponents, comma separated.
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<f64>>,
    /// Inverse temperatures, comma separated.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Forced-row fractions, comma separated (aeu).
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,
    /// Population size for population dynamics and identity checks.
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    average_last: Option<usize>,
    #[arg(long)]
    grid_step: Option<f64>,
    /// Pass line for z-tests.
    #[arg(long)]
    z_max: Option<f64>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// TSV dump of the first tree (pwit).
    #[arg(long)]
    snapshot: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum BoundaryArg {
    Logistic,
    Zero,
}

impl Cli {
    fn config(self) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(self.experiment, self.seed);
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field { c.$target = v; })*
            };
        }
        set!(reps => reps, n => n, depth => depth, width => width, r => r, lambda => lambda, deltas => deltas,
             pop => pop_size, steps => steps, average_last => average_last, grid_step => grid_step, z_max => z_max);
        c.core_depth = self.core_depth;
        if let Some(b) = self.boundary {
            c.boundary = match b {
                BoundaryArg::Logistic => Boundary::LogisticIid,
                BoundaryArg::Zero => Boundary::Zero,
            };
        }
        c.snapshot = self.snapshot;
        c.out = self.out;
        c.format = self.format;
        c
    }
}

fn execute(cfg: &ExperimentConfig) -> Result<bool, HarnessError> {
    let report = harness::run(cfg)?;
    match &cfg.out {
        Some(path) => report.write_to(cfg.format, BufWriter::new(File::create(path)?))?,
        None => report.write_to(cfg.format, io::stdout().lock())?,
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let cfg = cli.config();
    let result = match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cfg)),
            Err(e) => Err(HarnessError::Config(e.to_string())),
        },
        None => execute(&cfg),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
