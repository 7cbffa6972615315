//! Mean-field TSP: the recursion with the second minimum.
//!
//! With `G(y) = ∫_{-y}^∞ P(X > u) du` the recursion becomes
//! `G'(y) = (1 + G(-y)) e^{-G(-y)}`. The limit of the optimal tour length
//! divided by n is `½ ∫ G (1 + G) e^{-G}`, about 2.0415. The integral
//! itself equals `∫_0^∞ z P(X1 + X2 ≥ z) dz`; the half comes from every
//! vertex carrying two tour edges.

use rand::Rng;

use super::grid::{damped_iteration, GridFunction, GridParams, GridSolution, TailModel};
use super::{averaged_moment, Combiner, EmpiricalPopulation, PointProcess, PopulationEstimate, RdeError, RdeSpec};
use crate::quad::trapezoid;

fn tsp_map(g: &GridFunction, out: &mut Vec<f64>) {
    let n = g.len();
    // integrand at node j uses G at the mirrored node n-1-j
    let rhs: Vec<f64> = (0..n)
        .map(|j| {
            let v = g.values[n - 1 - j];
            (1.0 + v) * (-v).exp()
        })
        .collect();
    let half = 0.5 * g.step;
    let mut acc = 0.0;
    out.push(0.0);
    for j in 1..n {
        acc += half * (rhs[j - 1] + rhs[j]);
        out.push(acc);
    }
}

/// Solve `G'(y) = (1 + G(-y)) e^{-G(-y)}` with `G = 0` below the grid.
pub fn solve_tsp_grid(params: &GridParams) -> Result<GridSolution, RdeError> {
    params.validate()?;
    let init = GridFunction::tabulate(params, TailModel::ZeroBelowLo, |x| {
        if x > 0.0 {
            x + (-x).exp().ln_1p()
        } else {
            x.exp().ln_1p()
        }
    });
    damped_iteration(params, init, tsp_map)
}

/// `∫ G (1 + G) e^{-G}`. Above `hi`, G continues linearly with its final
/// slope, giving the closed-form remainder `(a² + 3a + 3) e^{-a} / slope`.
pub fn tsp_integral(g: &GridFunction) -> f64 {
    let n = g.len();
    let body: Vec<f64> = g.values.iter().map(|&v| v * (1.0 + v) * (-v).exp()).collect();
    let a = g.values[n - 1];
    let slope = (g.values[n - 1] - g.values[n - 2]) / g.step;
    let tail = if slope > 0.0 { (a * a + 3.0 * a + 3.0) * (-a).exp() / slope } else { 0.0 };
    trapezoid(&body, g.step) + tail
}

/// Limit tour length per vertex, `½ ∫ G (1 + G) e^{-G}`.
pub fn tsp_constant(g: &GridFunction) -> f64 {
    0.5 * tsp_integral(g)
}

/// Half of `∫_0^∞ z P(X1 + X2 ≥ z) dz = E[((X1 + X2)^+)^2] / 2` under the
/// second-minimum recursion, by population dynamics. Comparable with
/// [`tsp_constant`].
pub fn tsp_constant_population(
    pop_size: usize,
    steps: usize,
    average_last: usize,
    rng: &mut impl Rng,
) -> Result<(PopulationEstimate, EmpiricalPopulation), RdeError> {
    let spec = RdeSpec::new(PointProcess::PoissonRate1, Combiner::KthMin(2))?;
    let init = EmpiricalPopulation::from_fn(pop_size, rng, |r| crate::dists::logistic_sample(r))?;
    let (est, pop) = averaged_moment(init, &spec, steps, average_last, 2.0, rng)?;
    Ok((PopulationEstimate { value: 0.5 * est.value, stderr: 0.5 * est.stderr, ..est }, pop))
}
