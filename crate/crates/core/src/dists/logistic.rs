use rand::Rng;

use crate::rng::open01;

/// `(1 + e^{-x})^{-1}`, evaluated without overflow for either sign of x.
#[inline]
pub fn logistic_cdf(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn logistic_survival(x: f64) -> f64 {
    logistic_cdf(-x)
}

#[inline]
pub fn logistic_pdf(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    let d = 1.0 + e;
    e / (d * d)
}

/// Inverse CDF, `ln(u / (1 - u))`.
#[inline]
pub fn logistic_quantile(u: f64) -> f64 {
    (u / (1.0 - u)).ln()
}

#[inline]
pub fn logistic_sample(rng: &mut impl Rng) -> f64 {
    logistic_quantile(open01(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::{ks_distance, MeanStderr};

    fn grid() -> impl Iterator<Item = f64> {
        (-4000..=4000).map(|i| i as f64 * 0.01)
    }

    #[test]
    fn known_values() {
        assert_eq!(logistic_cdf(0.0), 0.5);
        assert!((logistic_cdf(3f64.ln()) - 0.75).abs() < 1e-15);
        assert_eq!(logistic_cdf(-1000.0), 0.0);
        assert_eq!(logistic_cdf(1000.0), 1.0);
    }

    #[test]
    fn symmetry_identity() {
        for x in grid() {
            assert!((logistic_cdf(x) + logistic_cdf(-x) - 1.0).abs() <= 1e-15, "x = {x}");
        }
    }

    #[test]
    fn density_equals_f_times_one_minus_f() {
        for x in grid() {
            let f = logistic_cdf(x);
            assert!((logistic_pdf(x) - f * (1.0 - f)).abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for u in [1e-12, 0.01, 0.25, 0.5, 0.9, 1.0 - 1e-9] {
            assert!((logistic_cdf(logistic_quantile(u)) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_moments_and_ks() {
        let mut rng = stream(21, "logistic-sampler", 0);
        let xs: Vec<f64> = (0..1_000_000).map(|_| logistic_sample(&mut rng)).collect();
        let m = MeanStderr::from_slice(&xs);
        assert!(m.z(0.0).abs() < 3.0, "{m:?}");
        // variance stderr from the fourth moment: var(X^2) = E X^4 - (E X^2)^2
        let sq: Vec<f64> = xs.iter().map(|x| (x - m.mean) * (x - m.mean)).collect();
        let v = MeanStderr::from_slice(&sq);
        let pi2_3 = std::f64::consts::PI.powi(2) / 3.0;
        assert!(v.z(pi2_3).abs() < 3.0, "{v:?}");
        assert!(ks_distance(&xs, logistic_cdf) < 0.002);
    }
}
