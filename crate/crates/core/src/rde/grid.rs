use super::RdeError;

/// Discretization and iteration controls shared by the grid solvers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridParams {
    /// The grid is `[-half_width, half_width]`.
    pub half_width: f64,
    pub step: f64,
    /// Weight of the new iterate in `G <- (1 - a) G + a T[G]`.
    pub damping: f64,
    /// Exit once the scaled sup-norm residual `max |T[G] - G| / max(1, |G|)`
    /// drops below this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        Self { half_width: 30.0, step: 0.01, damping: 0.5, tol: 1e-9, max_iters: 20_000 }
    }
}

impl GridParams {
    pub fn validate(&self) -> Result<(), RdeError> {
        let bad = |m: &str| Err(RdeError::InvalidGrid(m.to_string()));
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return bad("half width must be positive");
        }
        if !(self.step > 0.0 && self.step < self.half_width) {
            return bad("step must lie in (0, half width)");
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return bad("damping must lie in (0, 1]");
        }
        if !(self.tol > 0.0) {
            return bad("tolerance must be positive");
        }
        let ratio = 2.0 * self.half_width / self.step;
        if (ratio - ratio.round()).abs() > 1e-6 || !(ratio.round() as usize).is_multiple_of(2) {
            return bad("2 * half_width / step must be an even integer so that 0 is a node");
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        (2.0 * self.half_width / self.step).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn with_step(self, step: f64) -> Self {
        Self { step, ..self }
    }
}

/// How the function is continued outside the tabulated range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TailModel {
    /// Identically zero below `lo`.
    ZeroBelowLo,
    /// Linear in log-log coordinates above `hi` (power-law growth).
    LinearAboveHi,
}

/// Real function tabulated at `lo, lo + step, …, hi`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GridFunction {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub values: Vec<f64>,
    pub tail_model: TailModel,
}

impl GridFunction {
    pub fn tabulate(params: &GridParams, tail_model: TailModel, f: impl Fn(f64) -> f64) -> Self {
        let n = params.len();
        let lo = -params.half_width;
        let values = (0..n).map(|i| f(lo + i as f64 * params.step)).collect();
        Self { lo, hi: params.half_width, step: params.step, values, tail_model }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check(&self) -> Result<(), RdeError> {
        let expected = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        if !(self.lo < self.hi) || expected != self.values.len() {
            return Err(RdeError::InvalidGrid(format!(
                "{} values for [{}, {}] at step {}",
                self.values.len(),
                self.lo,
                self.hi,
                self.step
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(RdeError::NonFinite);
        }
        Ok(())
    }

    /// Linear interpolation inside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let t = ((x - self.lo) / self.step).clamp(0.0, (self.len() - 1) as f64);
        let i = (t.floor() as usize).min(self.len() - 2);
        let w = t - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    /// Exponent and prefactor of `G(y) ≈ c y^b` fitted over the last tenth
    /// of the positive half of the grid.
    pub(crate) fn power_tail(&self) -> (f64, f64) {
        let n = self.len();
        let g_hi = self.values[n - 1];
        let back = ((self.hi / 10.0) / self.step).round().max(1.0) as usize;
        let ya = self.x(n - 1 - back);
        let ga = self.values[n - 1 - back];
        let b = if ga > 0.0 && g_hi > ga && ya > 0.0 {
            ((g_hi / ga).ln() / (self.hi / ya).ln()).max(1.0)
        } else {
            1.0
        };
        (g_hi / self.hi.powf(b), b)
    }
}

/// Result of a converged grid iteration.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GridSolution {
    pub g: GridFunction,
    pub iterations: usize,
    pub residual: f64,
}

/// Damped fixed-point iteration `G <- (1 - a) G + a T[G]` until the scaled
/// residual drops below `params.tol`.
pub(crate) fn damped_iteration(
    params: &GridParams,
    mut g: GridFunction,
    mut apply: impl FnMut(&GridFunction, &mut Vec<f64>),
) -> Result<GridSolution, RdeError> {
    let mut next = Vec::with_capacity(g.len());
    let mut residual = f64::INFINITY;
    for it in 1..=params.max_iters {
        next.clear();
        apply(&g, &mut next);
        residual = g
            .values
            .iter()
            .zip(&next)
            .map(|(&a, &b)| (b - a).abs() / a.abs().max(1.0))
            .fold(0.0, f64::max);
        if !residual.is_finite() {
            return Err(RdeError::NotConverged { iterations: it, residual });
        }
        if residual < params.tol {
            // exit on the fixed-point image itself so the residual is honest
            g.values.clone_from(&next);
            return Ok(GridSolution { g, iterations: it, residual });
        }
        let a = params.damping;
        for (v, &t) in g.values.iter_mut().zip(&next) {
            *v = (1.0 - a) * *v + a * t;
        }
    }
    Err(RdeError::NotConverged { iterations: params.max_iters, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let p = GridParams::default();
        p.validate().unwrap();
        assert_eq!(p.len(), 6001);
        let g = GridFunction::tabulate(&p, TailModel::ZeroBelowLo, |x| x);
        g.check().unwrap();
        assert_eq!(g.values[3000], 0.0);
        assert!((g.eval(0.125) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GridParams { step: 0.0, ..Default::default() }.validate().is_err());
        assert!(GridParams { step: 0.7, ..Default::default() }.validate().is_err());
        assert!(GridParams { damping: 1.5, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn power_tail_fit() {
        let p = GridParams::default();
        let g = GridFunction::tabulate(&p, TailModel::LinearAboveHi, |x| 0.5 * x.max(0.0).powi(2));
        let (c, b) = g.power_tail();
        assert!((b - 2.0).abs() < 1e-9 && (c - 0.5).abs() < 1e-9);
    }

    #[test]
    fn contraction_converges() {
        let p = GridParams { half_width: 1.0, step: 0.5, ..Default::default() };
        let g = GridFunction::tabulate(&p, TailModel::ZeroBelowLo, |_| 0.0);
        let sol = damped_iteration(&p, g, |g, out| out.extend(g.values.iter().map(|v| 0.5 * v + 1.0))).unwrap();
        assert!(sol.residual < p.tol);
        assert!(sol.g.values.iter().all(|v| (v - 2.0).abs() < 1e-8));
    }

    #[test]
    fn divergence_reported() {
        let p = GridParams { half_width: 1.0, step: 0.5, max_iters: 30, ..Default::default() };
        let g = GridFunction::tabulate(&p, TailModel::ZeroBelowLo, |_| 1.0);
        let err = damped_iteration(&p, g, |g, out| out.extend(g.values.iter().map(|v| 3.0 * v + 1.0))).unwrap_err();
        assert!(matches!(err, RdeError::NotConverged { iterations: 30, .. }));
    }
}
