use serde::{Deserialize, Serialize};

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_moments(m: &RunningMoments, seed: u64) -> Self {
        Self { mean: m.mean(), std_error: m.std_error(), n_samples: m.count(), seed }
    }

    /// `|mean - target| <= sigmas * std_error`.
    pub fn agrees_with(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.std_error
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { mean: self.mean * factor, std_error: self.std_error * factor.abs(), ..*self }
    }
}

/// Streaming mean and centered second moment, mergeable (Chan et al.).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(a: Self, b: Self) -> Self {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let count = a.count + b.count;
        let delta = b.mean - a.mean;
        let mean = a.mean + delta * b.count as f64 / count as f64;
        let m2 = a.m2 + b.m2 + delta * delta * a.count as f64 * b.count as f64 / count as f64;
        Self { count, mean, m2 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample standard deviation over `sqrt(count)`.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2 / (self.count - 1) as f64).sqrt() / (self.count as f64).sqrt()
    }
}

/// Two-sided Kolmogorov-Smirnov distance between sorted samples and a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    })
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let pi2 = std::f64::consts::PI.powi(2);
        let s: f64 = (1..=8)
            .map(|j| {
                let odd = (2 * j - 1) as f64;
                (-odd * odd * pi2 / (8.0 * lambda * lambda)).exp()
            })
            .sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let s: f64 = (1..=100)
        .map(|j| {
            let j = j as f64;
            let sign = if j as u64 % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-2.0 * j * j * lambda * lambda).exp()
        })
        .sum();
    (2.0 * s).clamp(0.0, 1.0)
}

/// KS p-value for statistic `d` on `n` samples (Stephens' finite-n scaling).
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let rn = (n as f64).sqrt();
    kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d)
}

/// CDF of the `j`-th largest (`j` from 1) of `kappa` independent uniforms on
/// `[0, 1]`, which is `Beta(kappa - j + 1, j)`.
pub fn order_statistic_cdf(kappa: usize, j: usize, x: f64) -> f64 {
    assert!((1..=kappa).contains(&j), "order index {j} outside 1..={kappa}");
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    statrs::function::beta::beta_reg((kappa - j + 1) as f64, j as f64, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37 % 101) as f64).sqrt()).collect();
        let mut whole = RunningMoments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut left = RunningMoments::default();
        let mut right = RunningMoments::default();
        xs[..313].iter().for_each(|&x| left.push(x));
        xs[313..].iter().for_each(|&x| right.push(x));
        let merged = RunningMoments::merge(left, right);
        assert_eq!(merged.count(), 1000);
        assert!((merged.mean() - whole.mean()).abs() < 1e-12);
        assert!((merged.std_error() - whole.std_error()).abs() < 1e-12);
    }

    #[test]
    fn kolmogorov_branches_meet() {
        let below = kolmogorov_survival(1.18 - 1e-9);
        let above = kolmogorov_survival(1.18 + 1e-9);
        assert!((below - above).abs() < 1e-7);
        // tabulated: P(K > 1.3581) = 0.05, P(K > 1.6276) = 0.01
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 1e-4);
        assert!((kolmogorov_survival(0.8276) - 0.5).abs() < 1e-3);
    }

    #[test]
    fn order_statistics_of_two_uniforms() {
        // max of two uniforms: x^2; min: 1 - (1 - x)^2
        assert!((order_statistic_cdf(2, 1, 0.3) - 0.09).abs() < 1e-12);
        assert!((order_statistic_cdf(2, 2, 0.3) - 0.51).abs() < 1e-12);
        assert!((order_statistic_cdf(1, 1, 0.42) - 0.42).abs() < 1e-12);
    }

    #[test]
    fn ks_distance_of_exact_grid() {
        let xs: Vec<f64> = (0..10).map(|i| (i as f64 + 0.5) / 10.0).collect();
        assert!((ks_statistic(&xs, |x| x) - 0.05).abs() < 1e-12);
    }
}
