use rand::Rng;
use rand_distr::Exp1;

use super::PwitError;

/// Cap on explicit vertices for [`sample_pwit`].
pub const DEFAULT_NODE_CAP: usize = 5_000_000;
/// Vertex budget used by [`default_core_depth`].
pub const CORE_NODE_BUDGET: usize = 100_000;

/// Vertices are numbered breadth first: the root is 0 and the children of
/// `v` are `K v + 1, …, K v + K`. `weight[v]` is the weight of the edge from
/// `v` to its parent (0 for the root).
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPwit {
    depth: usize,
    width: usize,
    core_depth: usize,
    weight: Vec<f64>,
    level_start: Vec<usize>,
}

fn node_count(width: usize, depth: usize) -> u128 {
    let k = width as u128;
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=depth {
        total = total.saturating_add(level);
        level = level.saturating_mul(k);
    }
    total
}

/// Largest core depth `≤ depth` whose explicit tree fits in
/// [`CORE_NODE_BUDGET`] vertices (at least 1).
pub fn default_core_depth(depth: usize, width: usize) -> usize {
    let mut c = 1;
    while c < depth && node_count(width, c + 1) <= CORE_NODE_BUDGET as u128 {
        c += 1;
    }
    c
}

/// Fully explicit tree of depth `h` and width `k`.
pub fn sample_pwit(h: usize, k: usize, rng: &mut impl Rng) -> Result<TruncatedPwit, PwitError> {
    sample_pwit_core(h, k, h, DEFAULT_NODE_CAP, rng)
}

/// Tree of nominal depth `h`, explicit down to `core_depth`.
pub fn sample_pwit_core(
    h: usize,
    k: usize,
    core_depth: usize,
    cap: usize,
    rng: &mut impl Rng,
) -> Result<TruncatedPwit, PwitError> {
    if h == 0 || k == 0 {
        return Err(PwitError::InvalidShape { depth: h, width: k });
    }
    if core_depth == 0 || core_depth > h {
        return Err(PwitError::InvalidCore { core: core_depth, depth: h });
    }
    let nodes = node_count(k, core_depth);
    if nodes > cap as u128 {
        return Err(PwitError::TooLarge { nodes, cap });
    }
    let n = nodes as usize;
    let mut level_start = Vec::with_capacity(core_depth + 2);
    let mut start = 0usize;
    let mut size = 1usize;
    for _ in 0..=core_depth {
        level_start.push(start);
        start += size;
        size = size.saturating_mul(k);
    }
    level_start.push(n);

    let mut weight = vec![0.0; n];
    let interior = level_start[core_depth];
    for v in 0..interior {
        let mut acc = 0.0;
        for j in 1..=k {
            acc += rng.sample::<f64, _>(Exp1);
            weight[k * v + j] = acc;
        }
    }
    Ok(TruncatedPwit { depth: h, width: k, core_depth, weight, level_start })
}

impl TruncatedPwit {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn core_depth(&self) -> usize {
        self.core_depth
    }

    /// Number of explicit vertices.
    pub fn len(&self) -> usize {
        self.weight.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weight.is_empty()
    }

    /// Index of the first vertex at depth `d`, for `d ≤ core_depth + 1`.
    pub fn level_start(&self, d: usize) -> usize {
        self.level_start[d]
    }

    /// Vertices with children in the explicit tree.
    pub fn interior_len(&self) -> usize {
        self.level_start[self.core_depth]
    }

    pub fn vertex_depth(&self, v: usize) -> usize {
        self.level_start.partition_point(|&s| s <= v) - 1
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v > 0).then(|| (v - 1) / self.width)
    }

    /// 1-based position of `v` among its siblings.
    pub fn child_index(&self, v: usize) -> usize {
        (v - 1) % self.width + 1
    }

    pub fn children(&self, v: usize) -> std::ops::Range<usize> {
        if v < self.interior_len() {
            self.width * v + 1..self.width * v + self.width + 1
        } else {
            0..0
        }
    }

    /// Weight of the edge between `v` and its parent.
    pub fn weight(&self, v: usize) -> f64 {
        self.weight[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    /// Child indices along the path from the root, empty for the root.
    pub fn word(&self, mut v: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while v > 0 {
            w.push(self.child_index(v));
            v = (v - 1) / self.width;
        }
        w.reverse();
        w
    }
}

/// Replace the weights of `t`, for hand-built examples.
#[cfg(test)]
pub(crate) fn with_weights(mut t: TruncatedPwit, weight: Vec<f64>) -> TruncatedPwit {
    assert_eq!(weight.len(), t.len());
    t.weight = weight;
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::MeanStderr;

    #[test]
    fn star_has_increasing_weights() {
        let t = sample_pwit(1, 3, &mut stream(1, "t", 0)).unwrap();
        assert_eq!(t.len(), 4);
        let w = &t.weights()[1..];
        assert!(w[0] > 0.0 && w[0] < w[1] && w[1] < w[2]);
        assert_eq!(t.children(0), 1..4);
        assert_eq!(t.children(2), 0..0);
    }

    #[test]
    fn indexing() {
        let t = sample_pwit(3, 4, &mut stream(2, "t", 0)).unwrap();
        assert_eq!(t.len(), 1 + 4 + 16 + 64);
        assert_eq!(t.interior_len(), 21);
        for v in 1..t.len() {
            let p = t.parent(v).unwrap();
            assert!(t.children(p).contains(&v));
            assert_eq!(t.vertex_depth(v), t.vertex_depth(p) + 1);
            assert_eq!(t.word(v).len(), t.vertex_depth(v));
        }
        assert_eq!(t.word(0), Vec::<usize>::new());
        assert_eq!(t.word(4 * 2 + 3), vec![2, 3]);
    }

    #[test]
    fn guards() {
        let mut rng = stream(3, "t", 0);
        assert!(matches!(sample_pwit(0, 3, &mut rng), Err(PwitError::InvalidShape { .. })));
        assert!(matches!(sample_pwit(2, 0, &mut rng), Err(PwitError::InvalidShape { .. })));
        assert!(matches!(sample_pwit(12, 30, &mut rng), Err(PwitError::TooLarge { .. })));
        assert!(matches!(sample_pwit_core(4, 3, 5, 1000, &mut rng), Err(PwitError::InvalidCore { .. })));
        assert!(matches!(sample_pwit_core(4, 3, 3, 10, &mut rng), Err(PwitError::TooLarge { .. })));
    }

    #[test]
    fn width_one_is_a_path() {
        let t = sample_pwit(5, 1, &mut stream(4, "t", 0)).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.vertex_depth(5), 5);
    }

    #[test]
    fn default_core_fits_budget() {
        assert_eq!(default_core_depth(12, 30), 3);
        assert_eq!(default_core_depth(2, 30), 2);
        assert_eq!(default_core_depth(12, 1), 12);
        assert_eq!(default_core_depth(1, 500_000), 1);
    }

    #[test]
    fn first_weight_and_gap_are_exp1() {
        let mut first = Vec::new();
        let mut gap = Vec::new();
        for i in 0..100_000 {
            let t = sample_pwit(1, 2, &mut stream(5, "t", i)).unwrap();
            first.push(t.weight(1));
            gap.push(t.weight(2) - t.weight(1));
        }
        let a = MeanStderr::from_slice(&first);
        let b = MeanStderr::from_slice(&gap);
        assert!(a.z(1.0).abs() < 3.0, "{a:?}");
        assert!(b.z(1.0).abs() < 3.0, "{b:?}");
    }
}
