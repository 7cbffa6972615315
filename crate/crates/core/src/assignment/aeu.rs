//! Constrained re-solving: how much does it cost to disagree with the
//! optimum on a prescribed share of rows?

use rand::Rng;

use super::{solve_exact, AssignmentError, CostMatrix, ForcedConstraints, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeuOutcome {
    /// Normalized-cost increase of the constrained optimum over the optimum.
    pub gap: f64,
    /// Fraction of rows whose assigned column differs from the optimum.
    pub disagree_fraction: f64,
    /// Number of rows whose optimal edge was forbidden.
    pub forced_rows: usize,
}

pub(crate) fn forced_row_count(delta: f64, n: usize) -> usize {
    // guard against 0.1 * 100 landing a hair above 10
    ((delta * n as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Forbid the optimal edge of `ceil(delta * n)` random rows and re-solve.
pub fn aeu_probe(m: &CostMatrix, delta: f64, rng: &mut impl Rng) -> Result<AeuOutcome> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(AssignmentError::InvalidDelta(delta));
    }
    let n = m.n();
    let k = forced_row_count(delta, n).min(n);
    if k == 0 {
        return Ok(AeuOutcome { gap: 0.0, disagree_fraction: 0.0, forced_rows: 0 });
    }
    let opt = solve_exact(m, None)?;
    let mut constraints = ForcedConstraints::default();
    for row in rand::seq::index::sample(rng, n, k) {
        constraints.forbid(row, opt.perm[row]);
    }
    let alt = solve_exact(m, Some(&constraints))?;
    let differ = opt.perm.iter().zip(&alt.perm).filter(|(a, b)| a != b).count();
    Ok(AeuOutcome {
        gap: alt.normalized_cost - opt.normalized_cost,
        disagree_fraction: differ as f64 / n as f64,
        forced_rows: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::Scale;
    use crate::rng::stream;

    #[test]
    fn zero_delta_is_free() {
        let m = CostMatrix::sample(20, Scale::MeanN, &mut stream(1, "aeu", 0)).unwrap();
        let out = aeu_probe(&m, 0.0, &mut stream(1, "aeu-rows", 0)).unwrap();
        assert_eq!(out, AeuOutcome { gap: 0.0, disagree_fraction: 0.0, forced_rows: 0 });
    }

    #[test]
    fn gap_nonnegative_and_disagreement_covers_forced_rows() {
        for t in 0..50 {
            let m = CostMatrix::sample(30, Scale::MeanN, &mut stream(2, "aeu", t)).unwrap();
            for delta in [0.1, 0.5, 1.0] {
                let out = aeu_probe(&m, delta, &mut stream(2, "aeu-rows", t)).unwrap();
                assert!(out.gap >= 0.0);
                assert!(out.disagree_fraction >= out.forced_rows as f64 / 30.0);
            }
        }
    }

    #[test]
    fn row_counts() {
        assert_eq!(forced_row_count(0.1, 100), 10);
        assert_eq!(forced_row_count(0.3, 100), 30);
        assert_eq!(forced_row_count(0.05, 10), 1);
        assert_eq!(forced_row_count(0.0, 10), 0);
    }

    #[test]
    fn rejects_bad_delta() {
        let m = CostMatrix::sample(3, Scale::MeanN, &mut stream(1, "aeu", 0)).unwrap();
        assert!(aeu_probe(&m, 1.5, &mut stream(0, "x", 0)).is_err());
    }
}
