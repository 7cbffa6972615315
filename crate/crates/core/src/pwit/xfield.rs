use rand::Rng;

use super::{Boundary, FrontierLaw, PwitError, TruncatedPwit, DEFAULT_POOL_SIZE};

/// Values of `X` on both orientations of every explicit edge.
///
/// `forward[v]` is `X` on the edge (parent, v) seen from the parent: the
/// value of the subtree hanging below `v`. For the root it is the root's own
/// value `min_j (W_j - X_j)`. `backward[v]` is `X` on the same edge seen from
/// `v`: the value of everything on the parent's side. It is `NaN` for the
/// root and `+∞` when the parent has no other neighbour.
#[derive(Debug, Clone, PartialEq)]
pub struct XField {
    boundary: Boundary,
    forward: Vec<f64>,
    backward: Vec<f64>,
}

/// Propagate with a frontier law built for this tree alone. Use
/// [`propagate_x_with`] to share one law across many trees.
pub fn propagate_x(t: &TruncatedPwit, boundary: Boundary, rng: &mut impl Rng) -> Result<XField, PwitError> {
    let law = FrontierLaw::for_tree(t, boundary, DEFAULT_POOL_SIZE, rng)?;
    propagate_x_with(t, &law, rng)
}

pub fn propagate_x_with(t: &TruncatedPwit, law: &FrontierLaw, rng: &mut impl Rng) -> Result<XField, PwitError> {
    let levels = t.depth() - t.core_depth();
    if law.width() != t.width() || law.levels() != levels {
        return Err(PwitError::FrontierMismatch(format!(
            "law has width {} and {} levels, tree needs width {} and {levels}",
            law.width(),
            law.levels(),
            t.width()
        )));
    }
    let n = t.len();
    let interior = t.interior_len();
    let w = t.weights();
    let mut forward = vec![0.0; n];
    for x in forward[interior..].iter_mut() {
        *x = law.draw(rng);
    }
    for v in (0..interior).rev() {
        forward[v] = subtree_value(t, &forward, v);
    }

    let mut backward = vec![f64::NAN; n];
    for p in 0..interior {
        // two smallest of W - X over all neighbours of p
        let (mut b1, mut i1, mut b2) = (f64::INFINITY, usize::MAX, f64::INFINITY);
        let mut offer = |val: f64, idx: usize| {
            if val < b1 {
                b2 = b1;
                b1 = val;
                i1 = idx;
            } else if val < b2 {
                b2 = val;
            }
        };
        if p > 0 {
            offer(w[p] - backward[p], usize::MAX - 1);
        }
        for c in t.children(p) {
            offer(w[c] - forward[c], c);
        }
        for c in t.children(p) {
            backward[c] = if c == i1 { b2 } else { b1 };
        }
    }
    Ok(XField { boundary: law.boundary(), forward, backward })
}

#[inline]
fn subtree_value(t: &TruncatedPwit, forward: &[f64], v: usize) -> f64 {
    let w = t.weights();
    t.children(v).map(|c| w[c] - forward[c]).fold(f64::INFINITY, f64::min)
}

impl XField {
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn forward(&self, v: usize) -> f64 {
        self.forward[v]
    }

    pub fn backward(&self, v: usize) -> f64 {
        self.backward[v]
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Value at the root, `min_j (W(φ, j) - X(→j))`.
    pub fn root_value(&self) -> f64 {
        self.forward[0]
    }

    /// Largest `|X(→v) - min_j (W_j - X(→v j))|` over interior vertices.
    pub fn recursion_residual(&self, t: &TruncatedPwit) -> Result<f64, PwitError> {
        if t.len() != self.len() {
            return Err(PwitError::Mismatch);
        }
        Ok((0..t.interior_len())
            .map(|v| (self.forward[v] - subtree_value(t, &self.forward, v)).abs())
            .fold(0.0, f64::max))
    }
}
