//! Shortest augmenting path with row/column potentials.
//!
//! Rows are inserted one at a time. For each new row a Dijkstra search over
//! reduced costs `c(i, j) - u[i] - v[j]` finds the cheapest augmenting path to
//! a free column, after which the potentials of the scanned vertices are
//! shifted so that reduced costs stay nonnegative. O(n^3) worst case.

use super::{Assignment, AssignmentError, CostMatrix, ForcedConstraints, Result};

const NONE: usize = usize::MAX;

struct Solution {
    col4row: Vec<usize>,
    u: Vec<f64>,
    v: Vec<f64>,
}

fn augment(n: usize, cost: &[f64]) -> Result<Solution> {
    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut col4row = vec![NONE; n];
    let mut row4col = vec![NONE; n];
    let mut path = vec![NONE; n];
    let mut shortest = vec![f64::INFINITY; n];
    let mut remaining = vec![0usize; n];
    let mut scanned_row = vec![false; n];
    let mut scanned_col = vec![false; n];

    for cur_row in 0..n {
        for (it, slot) in remaining.iter_mut().enumerate() {
            *slot = n - it - 1;
        }
        let mut num_remaining = n;
        scanned_row.fill(false);
        scanned_col.fill(false);
        shortest.fill(f64::INFINITY);

        let mut min_val = 0.0;
        let mut i = cur_row;
        let sink = loop {
            scanned_row[i] = true;
            let row = &cost[i * n..(i + 1) * n];
            let ui = u[i];
            let mut lowest = f64::INFINITY;
            let mut index = NONE;
            for (it, &j) in remaining[..num_remaining].iter().enumerate() {
                let r = min_val + row[j] - ui - v[j];
                if r < shortest[j] {
                    path[j] = i;
                    shortest[j] = r;
                }
                let s = shortest[j];
                if s < lowest || (s == lowest && row4col[j] == NONE) {
                    lowest = s;
                    index = it;
                }
            }
            min_val = lowest;
            if index == NONE || !min_val.is_finite() {
                return Err(AssignmentError::Infeasible);
            }
            let j = remaining[index];
            scanned_col[j] = true;
            num_remaining -= 1;
            remaining[index] = remaining[num_remaining];
            if row4col[j] == NONE {
                break j;
            }
            i = row4col[j];
        };

        u[cur_row] += min_val;
        for r in 0..n {
            if scanned_row[r] && r != cur_row {
                u[r] += min_val - shortest[col4row[r]];
            }
        }
        for j in 0..n {
            if scanned_col[j] {
                v[j] -= min_val - shortest[j];
            }
        }

        let mut j = sink;
        loop {
            let i = path[j];
            row4col[j] = i;
            let prev = std::mem::replace(&mut col4row[i], j);
            if i == cur_row {
                break;
            }
            j = prev;
        }
    }
    Ok(Solution { col4row, u, v })
}

/// Dual feasibility and complementary slackness, up to rounding.
fn certify(n: usize, cost: &[f64], sol: &Solution) -> Result<()> {
    let scale = cost.iter().fold(1.0f64, |m, &c| m.max(c.abs()));
    let tol = 1e-9 * scale;
    for i in 0..n {
        for j in 0..n {
            let reduced = cost[i * n + j] - sol.u[i] - sol.v[j];
            if reduced < -tol {
                return Err(AssignmentError::Certificate(format!(
                    "negative reduced cost {reduced} at ({i}, {j})"
                )));
            }
            if sol.col4row[i] == j && reduced.abs() > tol {
                return Err(AssignmentError::Certificate(format!(
                    "matched edge ({i}, {j}) has reduced cost {reduced}"
                )));
            }
        }
    }
    Ok(())
}

fn solve_dense(n: usize, cost: &[f64]) -> Result<Vec<usize>> {
    let sol = augment(n, cost)?;
    certify(n, cost, &sol)?;
    Ok(sol.col4row)
}

/// Minimum-cost perfect matching, optionally honoring forced constraints.
///
/// Required pairs are contracted out before solving. Forbidden pairs are
/// priced at a sentinel above `n * max(cost)`, so an optimum that still uses
/// one proves that no feasible matching exists.
pub fn solve_exact(m: &CostMatrix, constraints: Option<&ForcedConstraints>) -> Result<Assignment> {
    let n = m.n();
    let constraints = match constraints {
        Some(c) if !c.is_empty() => c,
        _ => return Ok(Assignment::from_perm(m, solve_dense(n, m.as_slice())?)),
    };
    constraints.validate(n)?;

    let mut row_taken = vec![false; n];
    let mut col_taken = vec![false; n];
    let mut perm = vec![NONE; n];
    for &(r, c) in &constraints.required {
        row_taken[r] = true;
        col_taken[c] = true;
        perm[r] = c;
    }
    let rows: Vec<usize> = (0..n).filter(|&r| !row_taken[r]).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| !col_taken[c]).collect();
    let k = rows.len();
    if k > 0 {
        let sentinel = (n as f64 + 1.0) * (m.max_entry() + 1.0);
        let mut reduced = Vec::with_capacity(k * k);
        for &r in &rows {
            for &c in &cols {
                let forbidden = constraints.forbidden.contains(&(r, c));
                reduced.push(if forbidden { sentinel } else { m.get(r, c) });
            }
        }
        let sub = solve_dense(k, &reduced)?;
        for (a, &b) in sub.iter().enumerate() {
            let (r, c) = (rows[a], cols[b]);
            if constraints.forbidden.contains(&(r, c)) {
                return Err(AssignmentError::Infeasible);
            }
            perm[r] = c;
        }
    }
    Ok(Assignment::from_perm(m, perm))
}
