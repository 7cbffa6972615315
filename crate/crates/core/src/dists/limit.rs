use super::logistic::{logistic_cdf, logistic_pdf};
use super::DistError;
use crate::quad::integrate;

// Taylor coefficients of h at 0 (odd powers after the constant).
const H_SERIES: [f64; 6] = [
    0.5,
    -1.0 / 6.0,
    1.0 / 180.0,
    -1.0 / 5040.0,
    1.0 / 151_200.0,
    -1.0 / 4_790_016.0,
];

/// Limit density of the matched edge cost,
/// `h(x) = e^{-x} (e^{-x} - 1 + x) / (1 - e^{-x})^2`, with `h(0) = 1/2`.
pub fn h_density(x: f64) -> Result<f64, DistError> {
    if x < 0.0 || x.is_nan() {
        return Err(DistError::NegativeArgument(x));
    }
    if x < 1e-3 {
        let x2 = x * x;
        let mut acc = 0.0;
        let mut pow = x;
        for &c in &H_SERIES[1..] {
            acc += c * pow;
            pow *= x2;
        }
        return Ok(H_SERIES[0] + acc);
    }
    let em1 = (-x).exp_m1(); // e^{-x} - 1
    let e = em1 + 1.0;
    Ok(e * (em1 + x) / (em1 * em1))
}

/// `P(X1 + X2 > x)` for independent standard logistics, by quadrature of
/// `∫ f(u) (1 - F(x - u)) du`. Independent of the closed form above.
pub fn h_alt(x: f64) -> Result<f64, DistError> {
    if x < 0.0 || x.is_nan() {
        return Err(DistError::NegativeArgument(x));
    }
    let lo = -45.0;
    let hi = x + 45.0;
    Ok(integrate(|u| logistic_pdf(u) * logistic_cdf(u - x), lo, hi, 32, 1e-13))
}

/// Distribution function of `h`, `1 - x / (e^x - 1)`.
pub fn h_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < 1e-8 {
        x / 2.0
    } else {
        1.0 - x / x.exp_m1()
    }
}

/// Nonzero root of `1 - q = exp(-x q)` for x > 1, and 0 for x <= 1.
pub fn zeta3_q(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    // g(q) = -q - expm1(-x q): positive near 0, negative at 1
    let g = |q: f64| -q - (-x * q).exp_m1();
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0);
    for _ in 0..1100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `½ (1 - q(x)^2)`.
pub fn zeta3_density(x: f64) -> Result<f64, DistError> {
    if x < 0.0 || x.is_nan() {
        return Err(DistError::NegativeArgument(x));
    }
    let q = zeta3_q(x);
    // 1 - q = exp(-x q) at the root, which keeps the far tail accurate
    let p = if q == 0.0 { 1.0 } else { (-x * q).exp() };
    Ok(0.5 * p * (1.0 + q))
}

/// `(∫ h, ∫ x h)` over `[0, ∞)`. Beyond 50 both integrands are below 1e-19.
pub fn h_mass_and_mean() -> (f64, f64) {
    let h = |x: f64| h_density(x).expect("x >= 0");
    (integrate(h, 0.0, 50.0, 64, 1e-13), integrate(|x| x * h(x), 0.0, 50.0, 64, 1e-13))
}

/// Largest `|h_density - h_alt|` over `x = 0, step, 2 step, …, upto`.
pub fn h_forms_sup_diff(upto: f64, step: f64) -> f64 {
    let points = (upto / step).round() as usize;
    (0..=points)
        .map(|i| {
            let x = i as f64 * step;
            (h_density(x).expect("x >= 0") - h_alt(x).expect("x >= 0")).abs()
        })
        .fold(0.0, f64::max)
}

/// `∫ x ĥ(x) dx`. The density is flat on `[0, 1]` and has a kink at 1.
pub fn zeta3_mean() -> f64 {
    let f = |x: f64| x * zeta3_density(x).expect("x >= 0");
    integrate(f, 0.0, 1.0, 1, 1e-13) + integrate(f, 1.0, 60.0, 236, 1e-13)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::{PI2_OVER_6, ZETA3};

    fn h(x: f64) -> f64 {
        h_density(x).unwrap()
    }

    #[test]
    fn value_at_zero() {
        assert_eq!(h(0.0), 0.5);
        assert!((h_alt(0.0).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn series_and_closed_form_meet() {
        let below = h(1e-3 - 1e-12);
        let above = h(1e-3);
        assert!((below - above).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative() {
        assert_eq!(h_density(-1.0), Err(DistError::NegativeArgument(-1.0)));
        assert!(h_alt(-0.5).is_err());
        assert!(zeta3_density(-0.5).is_err());
    }

    #[test]
    fn mass_and_mean() {
        let (mass, mean) = h_mass_and_mean();
        assert!((mass - 1.0).abs() < 1e-8, "mass {mass}");
        assert!((mean - PI2_OVER_6).abs() < 1e-6, "mean {mean}");
    }

    #[test]
    fn closed_form_matches_convolution() {
        let mut prev = f64::INFINITY;
        let mut worst = 0.0f64;
        for i in 0..=2000 {
            let x = i as f64 * 0.01;
            let a = h_alt(x).unwrap();
            worst = worst.max((a - h(x)).abs());
            assert!(a <= prev + 1e-15);
            prev = a;
        }
        assert!(worst < 1e-6, "sup diff {worst}");
        assert_eq!(h_forms_sup_diff(20.0, 0.01), worst);
    }

    #[test]
    fn cdf_is_antiderivative() {
        for x in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let q = integrate(h, 0.0, x, 16, 1e-13);
            assert!((q - h_cdf(x)).abs() < 1e-10);
        }
        assert!((h_cdf(60.0) - 1.0).abs() < 1e-20 + 1e-15);
    }

    #[test]
    fn zeta3_companion() {
        assert_eq!(zeta3_density(0.5).unwrap(), 0.5);
        assert_eq!(zeta3_density(1.0).unwrap(), 0.5);
        assert!(zeta3_density(50.0).unwrap() < 1e-10);
        for x in [1.01, 1.5, 2.0, 5.0, 20.0] {
            let q = zeta3_q(x);
            assert!((1.0 - q - (-x * q).exp()).abs() < 1e-14);
        }
        let mean = zeta3_mean();
        assert!((mean - ZETA3).abs() < 1e-5, "mean {mean}");
    }
}
