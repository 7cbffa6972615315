//! Root-edge statistics of the optimal matching on truncated PWITs.

use std::fs::File;
use std::io::BufWriter;

use super::finite::first_row_costs;
use super::{frequency_cell, replicate, Cell, ExperimentConfig, HarnessError, Reference};
use crate::dists::{h_cdf, PI2_OVER_6};
use crate::pwit::{
    build_matching, default_core_depth, mchar_violations, propagate_x_with, root_edge_stats, sample_pwit_core,
    write_snapshot, FrontierLaw, DEFAULT_POOL_SIZE,
};
use crate::rng::stream;
use crate::stats::{ks_distance, ks_two_sample, MeanStderr};

const TRUNCATION_BUDGET: f64 = 0.01;
const RANK_CELLS: usize = 5;

struct TreeOutcome {
    cost: f64,
    rank: usize,
    involution: usize,
    mchar: usize,
    ties: u64,
    residual: f64,
}

pub fn run_pwit(cfg: &ExperimentConfig) -> Result<Vec<Cell>, HarnessError> {
    let core = cfg.core_depth.unwrap_or_else(|| default_core_depth(cfg.depth, cfg.width));
    if core < 2 {
        return Err(HarnessError::Config(format!(
            "depth {} leaves no determinate root; need at least 2 explicit levels",
            cfg.depth
        )));
    }
    let cap = usize::MAX;
    let law = FrontierLaw::new(
        cfg.boundary,
        cfg.width,
        cfg.depth - core,
        DEFAULT_POOL_SIZE,
        &mut stream(cfg.seed, "pwit/frontier", 0),
    )?;

    let outcomes = replicate(cfg.reps, |i| {
        let mut rng = stream(cfg.seed, "pwit/tree", i);
        let t = sample_pwit_core(cfg.depth, cfg.width, core, cap, &mut rng)?;
        let xf = propagate_x_with(&t, &law, &mut rng)?;
        let m = build_matching(&t, &xf)?;
        let root = root_edge_stats(&t, &m)?;
        if i == 0 {
            if let Some(path) = &cfg.snapshot {
                write_snapshot(&t, &xf, &m, BufWriter::new(File::create(path)?))?;
            }
        }
        Ok(TreeOutcome {
            cost: root.cost,
            rank: root.rank,
            involution: m.involution_violations(),
            mchar: mchar_violations(&t, &xf, &m)?,
            ties: m.ties(),
            residual: xf.recursion_residual(&t)?,
        })
    })?;

    let mut cells = Vec::new();
    let count = |f: fn(&TreeOutcome) -> usize| outcomes.iter().map(f).sum::<usize>() as f64;
    let involution = count(|o| o.involution);
    cells.push(Cell::check(
        "pwit_involution_violations".into(),
        involution,
        None,
        Reference::new(0.0, "the argmin rule is a matching on the PWIT (involution)"),
        involution == 0.0,
    ));
    let mchar = count(|o| o.mchar);
    cells.push(Cell::check(
        "pwit_mchar_violations".into(),
        mchar,
        None,
        Reference::new(0.0, "optimal matching characterization W(e) < X(->e) + X(<-e)"),
        mchar == 0.0,
    ));
    let residual = outcomes.iter().map(|o| o.residual).fold(0.0, f64::max);
    cells.push(Cell::check(
        "pwit_recursion_residual".into(),
        residual,
        None,
        Reference::new(0.0, "recursion X(->e) = min_j (W(e_j) - X(->e_j))"),
        residual == 0.0,
    ));
    let ties = outcomes.iter().map(|o| o.ties).sum::<u64>() as f64;
    cells.push(Cell::reported(
        "pwit_argmin_ties".into(),
        ties,
        None,
        Some(Reference::new(0.0, "the minimum is attained by a unique neighbour")),
    ));

    let costs: Vec<f64> = outcomes.iter().map(|o| o.cost).collect();
    let est = MeanStderr::from_slice(&costs);
    cells.push(Cell::check(
        "pwit_root_cost_mean".into(),
        est.mean,
        Some(est.stderr),
        Reference::new(PI2_OVER_6, "root edge cost has density h with mean pi^2/6; truncation budget 0.01"),
        (est.mean - PI2_OVER_6).abs() <= cfg.z_max * est.stderr + TRUNCATION_BUDGET,
    ));
    // 1% critical value of the one-sample KS statistic, floored at 0.02
    let ks_bound = (1.63 / (costs.len() as f64).sqrt()).max(0.02);
    let ks = ks_distance(&costs, h_cdf);
    cells.push(Cell::check(
        "pwit_root_cost_ks".into(),
        ks,
        None,
        Reference::new(ks_bound, "root edge cost has density h; KS critical value at level 1%, floor 0.02"),
        ks < ks_bound,
    ));
    for k in 1..=RANK_CELLS.min(cfg.width) {
        let hits = outcomes.iter().filter(|o| o.rank == k).count();
        cells.push(frequency_cell(
            format!("pwit_root_rank[k={k}]"),
            hits,
            outcomes.len(),
            Reference::new(0.5f64.powi(k as i32), "root edge rank law 2^-k"),
            cfg.z_max,
        ));
    }
    for &n in &cfg.n {
        let finite = first_row_costs(cfg.seed, n, cfg.reps)?;
        cells.push(Cell::reported(
            format!("pwit_vs_finite_ks[n={n}]"),
            ks_two_sample(&costs, &finite),
            None,
            Some(Reference::new(0.05, "local weak convergence of the finite-n matching to the PWIT")),
        ));
    }
    Ok(cells)
}
