//! Costs with density `~ x^r` near zero.
//!
//! With `G = -log P(X > x)`, the recursion `X = min_i (ξ_i - X_i)` driven by a
//! Poisson process of intensity `x^r` becomes the integral equation
//!
//! ```text
//! G(x) = ∫_{-x}^∞ (y + x)^r e^{-G(y)} dy
//! ```
//!
//! and the limit constant is `γ_r = (r + 1) ∫ G e^{-G}`. The physics
//! literature states the same equation with an extra factor `2 / r!`; that
//! factor reflects a different normalization and is not used here.

use rand::Rng;

use super::grid::{damped_iteration, GridFunction, GridParams, GridSolution, TailModel};
use super::{averaged_moment, EmpiricalPopulation, PointProcess, PopulationEstimate, RdeError, RdeSpec};
use crate::quad::trapezoid;
use crate::stats::neumaier_sum;

const TAIL_PANELS: usize = 128;

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `∫_0^T (t + a)^r e^{-(G_tail(hi + t) - G(hi))} dt` by Simpson, times
/// `e^{-G(hi)}`; `G_tail(y) = c y^b`.
fn upper_tail(a: f64, r: f64, hi: f64, c: f64, b: f64) -> f64 {
    let g_hi = c * hi.powf(b);
    if g_hi > 700.0 {
        return 0.0;
    }
    let slope = (c * b * hi.powf(b - 1.0)).max(1e-3);
    let span = (50.0 / slope).min(10.0 * hi);
    let h = span / TAIL_PANELS as f64;
    let f = |t: f64| {
        let y = hi + t;
        let base = (t + a).max(0.0);
        let p = if r == 0.0 { 1.0 } else { base.powf(r) };
        p * (-(c * y.powf(b))).exp()
    };
    let mut acc = f(0.0) + f(span);
    for k in 1..TAIL_PANELS {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn power_law_map(g: &GridFunction, r: f64, powers: &[f64], out: &mut Vec<f64>) {
    let n = g.len();
    let e: Vec<f64> = g.values.iter().map(|v| (-v).exp()).collect();
    let (c, b) = g.power_tail();
    for i in 0..n {
        // ∫ over [-x_i, hi]: nodes a = n-1-i .. n-1, with y + x_i = m * step
        let a = n - 1 - i;
        let mut acc = 0.0;
        if i > 0 {
            acc = 0.5 * (powers[0] * e[a] + powers[i] * e[n - 1]);
            for m in 1..i {
                acc += powers[m] * e[a + m];
            }
            acc *= g.step;
        }
        acc += upper_tail(g.hi + g.x(i), r, g.hi, c, b);
        out.push(acc);
    }
}

/// Solve the power-law integral equation on a symmetric grid.
pub fn solve_power_law_grid(r: f64, params: &GridParams) -> Result<GridSolution, RdeError> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(RdeError::InvalidSpec(format!("power-law exponent {r} must be >= 0")));
    }
    params.validate()?;
    let n = params.len();
    let powers: Vec<f64> = (0..n)
        .map(|m| if r == 0.0 { 1.0 } else { (m as f64 * params.step).powf(r) })
        .collect();
    let init = GridFunction::tabulate(params, TailModel::LinearAboveHi, |x| softplus(x).powf(r + 1.0) / (r + 1.0));
    damped_iteration(params, init, |g, out| power_law_map(g, r, &powers, out))
}

/// `γ_r = (r + 1) ∫ G e^{-G}` from a converged grid solution, including the
/// exponentially small contributions beyond both ends.
pub fn gamma_r(g: &GridFunction, r: f64) -> f64 {
    let n = g.len();
    let body: Vec<f64> = g.values.iter().map(|&v| v * (-v).exp()).collect();
    let mut total = trapezoid(&body, g.step);
    // below lo, G decays exponentially
    let (g0, g1) = (g.values[0], g.values[1]);
    if g0 > 0.0 && g1 > g0 {
        let rate = (g1 / g0).ln() / g.step;
        total += g0 / rate;
    }
    // above hi, G continues as c y^b
    let (c, b) = g.power_tail();
    if g.values[n - 1] < 700.0 {
        let span = 10.0 * g.hi;
        let panels = 4096;
        let h = span / panels as f64;
        let f = |y: f64| {
            let v = c * y.powf(b);
            v * (-v).exp()
        };
        let terms = (0..=panels).map(|k| {
            let w = if k == 0 || k == panels { 0.5 } else { 1.0 };
            w * f(g.hi + k as f64 * h)
        });
        total += h * neumaier_sum(terms);
    }
    (r + 1.0) * total
}

/// `γ_r = E[((X1 + X2)^+)^{r+2}] / (r + 2)` by population dynamics with the
/// power-law point process. Returns the estimate and the final population.
pub fn gamma_r_population(
    r: f64,
    pop_size: usize,
    steps: usize,
    average_last: usize,
    rng: &mut impl Rng,
) -> Result<(PopulationEstimate, EmpiricalPopulation), RdeError> {
    let spec = RdeSpec::new(PointProcess::PoissonPowerLaw(r), super::Combiner::Min)?;
    let init = EmpiricalPopulation::from_fn(pop_size, rng, |r| crate::dists::logistic_sample(r))?;
    averaged_moment(init, &spec, steps, average_last, r + 2.0, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{logistic_survival, PI2_OVER_6};

    fn coarse() -> GridParams {
        GridParams { half_width: 30.0, step: 0.02, ..Default::default() }
    }

    #[test]
    fn r0_recovers_logistic_survival() {
        let sol = solve_power_law_grid(0.0, &coarse()).unwrap();
        assert!(sol.residual < coarse().tol);
        let worst = (0..sol.g.len())
            .map(|i| ((-sol.g.values[i]).exp() - logistic_survival(sol.g.x(i))).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "sup error {worst}");
    }

    #[test]
    fn r0_constant() {
        let sol = solve_power_law_grid(0.0, &coarse()).unwrap();
        let g = gamma_r(&sol.g, 0.0);
        assert!((g - PI2_OVER_6).abs() < 1e-3, "gamma_0 = {g}");
    }

    #[test]
    fn solution_is_nondecreasing() {
        for r in [0.0, 1.0] {
            let sol = solve_power_law_grid(r, &coarse()).unwrap();
            assert!(sol.g.values.windows(2).all(|w| w[1] >= w[0]), "r = {r}");
        }
    }

    #[test]
    fn rejects_negative_exponent() {
        assert!(solve_power_law_grid(-0.5, &coarse()).is_err());
    }
}
