//! Adaptive Simpson quadrature.

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrate over `[a, b]` by splitting into `pieces` equal panels, each
/// handled adaptively. Splitting keeps the recursion from missing narrow
/// features on long intervals.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let pieces = pieces.max(1);
    let w = (b - a) / pieces as f64;
    let per = tol / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * w;
            let hi = if i + 1 == pieces { b } else { lo + w };
            adaptive_simpson(&f, lo, hi, per)
        })
        .fold(0.0, |acc, v| acc + v)
}

/// Composite trapezoid rule over equally spaced samples.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = crate::stats::neumaier_sum(values[1..n - 1].iter().copied());
            step * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert!((v - 0.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, 8, 1e-12);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn trapezoid_linear() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        assert!((trapezoid(&xs, 0.1) - 0.5).abs() < 1e-14);
    }
}
