//! Finite-n random assignment: cost matrices, the exact solver, the
//! brute-force oracle and the essential-uniqueness probe.

mod aeu;
mod brute;
mod solver;

use std::collections::BTreeSet;

use rand::Rng;
use rand_distr::Exp1;
use thiserror::Error;

pub use aeu::{aeu_probe, AeuOutcome};
pub use brute::{brute_force, BRUTE_FORCE_MAX_N};
pub use solver::solve_exact;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssignmentError {
    #[error("invalid matrix size {0}")]
    InvalidSize(usize),
    #[error("cost data has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("cost({row}, {col}) = {value} is not a finite nonnegative number")]
    InvalidEntry { row: usize, col: usize, value: f64 },
    #[error("brute force is limited to n <= {max}, got {n}")]
    TooLargeForBruteForce { n: usize, max: usize },
    #[error("row {row} out of range for n = {n}")]
    RowOutOfRange { row: usize, n: usize },
    #[error("invalid constraints: {0}")]
    InvalidConstraints(String),
    #[error("no perfect matching satisfies the constraints")]
    Infeasible,
    #[error("delta {0} outside [0, 1]")]
    InvalidDelta(f64),
    #[error("optimality certificate failed: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, AssignmentError>;

/// Sampling convention of the entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Scale {
    /// Exponential with mean n, so that `total / n` has an O(1) limit.
    MeanN,
    /// Exponential with mean 1.
    Unit,
}

/// Square matrix of finite nonnegative costs, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    cost: Vec<f64>,
    scale: Scale,
}

impl CostMatrix {
    pub fn new(n: usize, cost: Vec<f64>, scale: Scale) -> Result<Self> {
        if n == 0 {
            return Err(AssignmentError::InvalidSize(n));
        }
        if cost.len() != n * n {
            return Err(AssignmentError::ShapeMismatch { expected: n * n, got: cost.len() });
        }
        if let Some(k) = cost.iter().position(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(AssignmentError::InvalidEntry { row: k / n, col: k % n, value: cost[k] });
        }
        Ok(Self { n, cost, scale })
    }

    /// Build from nested rows; the scale is recorded as `Unit`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(AssignmentError::ShapeMismatch { expected: n, got: bad.len() });
        }
        Self::new(n, rows.concat(), Scale::Unit)
    }

    /// i.i.d. exponential entries, mean `n` or mean 1 depending on `scale`.
    pub fn sample(n: usize, scale: Scale, rng: &mut impl Rng) -> Result<Self> {
        if n == 0 {
            return Err(AssignmentError::InvalidSize(n));
        }
        let mean = match scale {
            Scale::MeanN => n as f64,
            Scale::Unit => 1.0,
        };
        let cost = (0..n * n)
            .map(|_| {
                let e: f64 = rng.sample(Exp1);
                e * mean
            })
            .collect();
        Ok(Self { n, cost, scale })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cost[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.cost[row * self.n..(row + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.cost
    }

    /// Sum of `cost(i, perm[i])` accumulated in row order.
    pub fn cost_of(&self, perm: &[usize]) -> f64 {
        perm.iter().enumerate().map(|(i, &j)| self.get(i, j)).sum()
    }

    /// Matrix whose row `i` is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Self {
        let cost = order.iter().flat_map(|&r| self.row(r).iter().copied()).collect();
        Self { n: self.n, cost, scale: self.scale }
    }

    fn max_entry(&self) -> f64 {
        self.cost.iter().copied().fold(0.0, f64::max)
    }
}

/// A perfect matching of rows to columns with its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `perm[i]` is the column assigned to row `i`.
    pub perm: Vec<usize>,
    pub total_cost: f64,
    /// `total_cost / n`.
    pub normalized_cost: f64,
}

impl Assignment {
    pub(crate) fn from_perm(m: &CostMatrix, perm: Vec<usize>) -> Self {
        let total_cost = m.cost_of(&perm);
        Self { normalized_cost: total_cost / m.n() as f64, total_cost, perm }
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.perm.len()];
        self.perm.iter().all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
    }
}

/// Edges that must or must not appear in the matching.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForcedConstraints {
    pub forbidden: BTreeSet<(usize, usize)>,
    pub required: BTreeSet<(usize, usize)>,
}

impl ForcedConstraints {
    pub fn is_empty(&self) -> bool {
        self.forbidden.is_empty() && self.required.is_empty()
    }

    pub fn forbid(&mut self, row: usize, col: usize) -> &mut Self {
        self.forbidden.insert((row, col));
        self
    }

    pub fn require(&mut self, row: usize, col: usize) -> &mut Self {
        self.required.insert((row, col));
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(AssignmentError::InvalidConstraints(msg));
        for &(r, c) in self.forbidden.iter().chain(&self.required) {
            if r >= n || c >= n {
                return bad(format!("pair ({r}, {c}) out of range for n = {n}"));
            }
        }
        let mut rows = BTreeSet::new();
        let mut cols = BTreeSet::new();
        for &(r, c) in &self.required {
            if !rows.insert(r) {
                return bad(format!("row {r} required twice"));
            }
            if !cols.insert(c) {
                return bad(format!("column {c} required twice"));
            }
            if self.forbidden.contains(&(r, c)) {
                return bad(format!("pair ({r}, {c}) both required and forbidden"));
            }
        }
        Ok(())
    }
}

/// 1-based rank of the assigned entry within its row; ties go to the
/// smaller column index.
pub fn edge_rank(m: &CostMatrix, a: &Assignment, row: usize) -> Result<usize> {
    let n = m.n();
    if row >= n || a.perm.len() != n {
        return Err(AssignmentError::RowOutOfRange { row, n });
    }
    let col = a.perm[row];
    let c = m.get(row, col);
    let below = m
        .row(row)
        .iter()
        .enumerate()
        .filter(|&(j, &x)| x < c || (x == c && j < col))
        .count();
    Ok(below + 1)
}
