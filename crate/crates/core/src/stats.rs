//! Summary statistics and Kolmogorov-Smirnov distances.

/// Compensated (Neumaier) summation. Result depends only on input order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sample mean with the standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStderr {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl MeanStderr {
    pub fn from_slice(xs: &[f64]) -> Self {
        let count = xs.len();
        if count == 0 {
            return Self { mean: f64::NAN, stderr: f64::NAN, count };
        }
        let n = count as f64;
        let mean = neumaier_sum(xs.iter().copied()) / n;
        let stderr = if count > 1 {
            let ss = neumaier_sum(xs.iter().map(|x| (x - mean) * (x - mean)));
            (ss / (n - 1.0) / n).sqrt()
        } else {
            f64::INFINITY
        };
        Self { mean, stderr, count }
    }

    pub fn variance(&self) -> f64 {
        self.stderr * self.stderr * self.count as f64
    }

    /// Standardized distance of the mean from `reference`.
    pub fn z(&self, reference: f64) -> f64 {
        (self.mean - reference) / self.stderr
    }
}

pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// One-sample KS distance sup |F_n - F| between the sample and `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let v = sorted(samples);
    ks_distance_sorted(&v, cdf)
}

pub fn ks_distance_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Two-sample KS distance sup |F_a - F_b|.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let a = sorted(a);
    let b = sorted(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(xs), 2.0);
    }

    #[test]
    fn mean_stderr_small_sample() {
        let m = MeanStderr::from_slice(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        // sample variance 5/3, stderr sqrt(5/12)
        assert!((m.stderr - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ks_of_uniform_grid() {
        // midpoints (i + 1/2)/n against U(0,1): distance exactly 1/(2n)
        let n = 100;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_distance(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.005).abs() < 1e-12);
    }

    #[test]
    fn ks_two_sample_disjoint_and_equal() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0]), 0.0);
        assert!((ks_two_sample(&[1.0, 2.0], &[1.5]) - 0.5).abs() < 1e-15);
    }
}
