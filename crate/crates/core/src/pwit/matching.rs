use super::{PwitError, TruncatedPwit, XField};

/// Matching `v ↦ v*` with `v* = argmin_{v'} (W(v, v') - X(v, v'))`.
///
/// The argmin is computed for every vertex above the core frontier. Only
/// vertices at distance at least 2 from the frontier count as matched; the
/// rest are indeterminate.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeMatching {
    argmin: Vec<usize>,
    determinate: usize,
    ties: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RootEdge {
    pub cost: f64,
    /// 1-based position of the partner among the root's children.
    pub rank: usize,
}

pub fn build_matching(t: &TruncatedPwit, xf: &XField) -> Result<TreeMatching, PwitError> {
    if xf.len() != t.len() {
        return Err(PwitError::Mismatch);
    }
    let interior = t.interior_len();
    let mut argmin = Vec::with_capacity(interior);
    let mut ties = 0u64;
    for v in 0..interior {
        let (mut best, mut second, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
        if let Some(p) = t.parent(v) {
            best = t.weight(v) - xf.backward(v);
            arg = p;
        }
        for c in t.children(v) {
            let val = t.weight(c) - xf.forward(c);
            if val < best {
                second = best;
                best = val;
                arg = c;
            } else if val < second {
                second = val;
            }
        }
        if best == second {
            ties += 1;
        }
        argmin.push(arg);
    }
    let determinate = if t.core_depth() >= 2 { t.level_start(t.core_depth() - 1) } else { 0 };
    Ok(TreeMatching { argmin, determinate, ties })
}

impl TreeMatching {
    pub fn is_determinate(&self, v: usize) -> bool {
        v < self.determinate
    }

    /// Number of determinate vertices; they are `0..determinate_len()`.
    pub fn determinate_len(&self) -> usize {
        self.determinate
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.is_determinate(v).then(|| self.argmin[v])
    }

    /// Vertices whose minimum was attained twice.
    pub fn ties(&self) -> u64 {
        self.ties
    }

    /// Whether the edge between `c` and its parent is in the matching, when
    /// the parent is determinate.
    pub fn edge_matched(&self, t: &TruncatedPwit, c: usize) -> Option<bool> {
        let p = t.parent(c)?;
        if !self.is_determinate(p) {
            return None;
        }
        Some(self.argmin[p] == c && self.argmin[c] == p)
    }

    /// Determinate vertices `v` with `(v*)* ≠ v`.
    pub fn involution_violations(&self) -> usize {
        (0..self.determinate).filter(|&v| self.argmin[self.argmin[v]] != v).count()
    }
}

/// Edges below determinate vertices where membership in the matching
/// disagrees with the test `W(e) < X(→e) + X(←e)`.
pub fn mchar_violations(t: &TruncatedPwit, xf: &XField, m: &TreeMatching) -> Result<usize, PwitError> {
    if xf.len() != t.len() || m.argmin.len() != t.interior_len() {
        return Err(PwitError::Mismatch);
    }
    let mut bad = 0;
    for p in 0..m.determinate {
        for c in t.children(p) {
            let by_argmin = m.argmin[p] == c && m.argmin[c] == p;
            let by_test = t.weight(c) < xf.forward(c) + xf.backward(c);
            if by_argmin != by_test {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

pub fn root_edge_stats(t: &TruncatedPwit, m: &TreeMatching) -> Result<RootEdge, PwitError> {
    if m.argmin.len() != t.interior_len() {
        return Err(PwitError::Mismatch);
    }
    let c = m.partner(0).ok_or(PwitError::IndeterminateRoot)?;
    Ok(RootEdge { cost: t.weight(c), rank: t.child_index(c) })
}
