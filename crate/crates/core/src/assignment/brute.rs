//! Exhaustive oracle over all permutations.

use super::{Assignment, AssignmentError, CostMatrix, Result};

pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Advance `p` to the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("pivot has a successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Minimum over all n! permutations. Among equal costs the lexicographically
/// smallest permutation wins.
pub fn brute_force(m: &CostMatrix) -> Result<Assignment> {
    let n = m.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(AssignmentError::TooLargeForBruteForce { n, max: BRUTE_FORCE_MAX_N });
    }
    let mut p: Vec<usize> = (0..n).collect();
    let mut best = p.clone();
    let mut best_cost = m.cost_of(&p);
    while next_permutation(&mut p) {
        let c = m.cost_of(&p);
        if c < best_cost {
            best_cost = c;
            best.copy_from_slice(&p);
        }
    }
    Ok(Assignment::from_perm(m, best))
}
