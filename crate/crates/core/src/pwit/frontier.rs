use rand::Rng;
use rand_distr::Exp1;

use super::{PwitError, TruncatedPwit};
use crate::dists::logistic_sample;

pub const DEFAULT_POOL_SIZE: usize = 1 << 18;

/// Values placed on the leaf-level edges at depth `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Boundary {
    LogisticIid,
    Zero,
}

impl Boundary {
    pub fn draw(&self, rng: &mut impl Rng) -> f64 {
        match self {
            Boundary::LogisticIid => logistic_sample(rng),
            Boundary::Zero => 0.0,
        }
    }
}

/// Law of `X(→v)` for a vertex `levels` generations above the boundary.
///
/// For `levels = 0` draws are exact boundary values. Otherwise the law is
/// carried by a pool: start from boundary draws and apply the K-truncated
/// map `x ↦ min_{j ≤ K} (ξ_j - x_j)` once per level, resampling the previous
/// pool for the `x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierLaw {
    boundary: Boundary,
    width: usize,
    levels: usize,
    pool: Vec<f64>,
}

impl FrontierLaw {
    pub fn new(
        boundary: Boundary,
        width: usize,
        levels: usize,
        pool_size: usize,
        rng: &mut impl Rng,
    ) -> Result<Self, PwitError> {
        if width == 0 {
            return Err(PwitError::InvalidShape { depth: levels, width });
        }
        if levels == 0 {
            return Ok(Self { boundary, width, levels, pool: Vec::new() });
        }
        if pool_size < 2 {
            return Err(PwitError::FrontierMismatch(format!("pool size {pool_size} too small")));
        }
        let mut pool: Vec<f64> = (0..pool_size).map(|_| boundary.draw(rng)).collect();
        let mut next = vec![0.0; pool_size];
        for _ in 0..levels {
            for slot in next.iter_mut() {
                let mut acc = 0.0;
                let mut best = f64::INFINITY;
                for _ in 0..width {
                    acc += rng.sample::<f64, _>(Exp1);
                    best = best.min(acc - pool[rng.random_range(0..pool_size)]);
                }
                *slot = best;
            }
            std::mem::swap(&mut pool, &mut next);
        }
        Ok(Self { boundary, width, levels, pool })
    }

    /// Law for the frontier of `t`.
    pub fn for_tree(t: &TruncatedPwit, boundary: Boundary, pool_size: usize, rng: &mut impl Rng) -> Result<Self, PwitError> {
        Self::new(boundary, t.width(), t.depth() - t.core_depth(), pool_size, rng)
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn is_exact(&self) -> bool {
        self.levels == 0
    }

    pub fn pool(&self) -> &[f64] {
        &self.pool
    }

    #[inline]
    pub fn draw(&self, rng: &mut impl Rng) -> f64 {
        if self.levels == 0 {
            self.boundary.draw(rng)
        } else {
            self.pool[rng.random_range(0..self.pool.len())]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::logistic_cdf;
    use crate::rng::stream;
    use crate::stats::ks_distance;

    #[test]
    fn zero_levels_is_the_boundary() {
        let law = FrontierLaw::new(Boundary::Zero, 5, 0, 100, &mut stream(1, "f", 0)).unwrap();
        assert!(law.is_exact());
        assert_eq!(law.draw(&mut stream(1, "f", 1)), 0.0);
    }

    #[test]
    fn logistic_pool_stays_logistic() {
        // resampling noise accumulates along the shift direction, so the
        // pool must be large for the law to stay close over several levels
        let law = FrontierLaw::new(Boundary::LogisticIid, 30, 4, 1 << 18, &mut stream(2, "f", 0)).unwrap();
        let d = ks_distance(law.pool(), logistic_cdf);
        assert!(d < 0.01, "KS {d}");
    }

    #[test]
    fn zero_boundary_one_level_is_first_arrival() {
        // min_j ξ_j = ξ_1 ~ Exp(1)
        let law = FrontierLaw::new(Boundary::Zero, 10, 1, 1 << 16, &mut stream(3, "f", 0)).unwrap();
        let d = ks_distance(law.pool(), |x| if x > 0.0 { 1.0 - (-x).exp() } else { 0.0 });
        assert!(d < 0.01, "KS {d}");
    }

    #[test]
    fn rejects_bad_args() {
        let mut rng = stream(4, "f", 0);
        assert!(FrontierLaw::new(Boundary::Zero, 0, 1, 100, &mut rng).is_err());
        assert!(FrontierLaw::new(Boundary::Zero, 3, 2, 1, &mut rng).is_err());
    }
}
