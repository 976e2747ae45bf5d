//! Binomial estimates, Wilson intervals and log-log slope fits.

use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Wilson score interval for `k` successes in `n` trials at normal quantile
/// `z`. Returns `(0, 1)` when `n == 0`.
pub fn wilson_interval<T: Float>(k: u64, n: u64, z: T) -> (T, T) {
    if n == 0 {
        return (T::zero(), T::one());
    }
    let nf = T::from(n).expect("count fits");
    let p = T::from(k).expect("count fits") / nf;
    let two = T::one() + T::one();
    let four = two + two;
    let z2 = z * z;
    let denom = T::one() + z2 / nf;
    let centre = (p + z2 / (two * nf)) / denom;
    let half = z * (p * (T::one() - p) / nf + z2 / (four * nf * nf)).sqrt() / denom;
    let lo = (centre - half).max(T::zero()).min(p);
    let hi = (centre + half).min(T::one()).max(p);
    (lo, hi)
}

pub const Z95: f64 = 1.959_963_984_540_054;

/// Binomial standard deviation of a rate estimate at true rate `p`.
pub fn binomial_sigma<T: Float>(p: T, n: u64) -> T {
    if n == 0 {
        return T::infinity();
    }
    (p * (T::one() - p) / T::from(n).expect("count fits")).sqrt()
}

/// Whether `estimate` lies within `k` binomial standard deviations of
/// `expected` for `n` trials.
pub fn within_sigma<T: Float>(estimate: T, expected: T, n: u64, k: T) -> bool {
    (estimate - expected).abs() <= k * binomial_sigma(expected, n)
}

/// Least-squares slope of `ln y` against `ln x`, skipping non-positive
/// points. `None` with fewer than two usable points.
pub fn loglog_slope<T: Float>(xs: &[T], ys: &[T]) -> Option<T> {
    let pts: Vec<(T, T)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > T::zero() && **y > T::zero())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = T::from(pts.len()).expect("small count");
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / n;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let sxy = pts
        .iter()
        .fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    let sxx = pts
        .iter()
        .fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    (sxx > T::zero()).then(|| sxy / sxx)
}

/// Aggregate of one experiment point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub shots_total: u64,
    pub shots_accepted: u64,
    /// Output errors among accepted shots.
    pub output_errors: u64,
    pub p_out_hat: f64,
    pub discard_ratio: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// `iterations_histogram[k]` counts shots that used `k + 1` global
    /// iterations.
    pub iterations_histogram: Vec<u64>,
    pub unconverged: u64,
}

impl ExperimentStats {
    pub fn from_counts(shots_total: u64, shots_accepted: u64, output_errors: u64) -> Self {
        assert!(shots_accepted <= shots_total && output_errors <= shots_accepted);
        let p_out_hat = if shots_accepted == 0 {
            0.0
        } else {
            output_errors as f64 / shots_accepted as f64
        };
        let discard_ratio = if shots_total == 0 {
            0.0
        } else {
            1.0 - shots_accepted as f64 / shots_total as f64
        };
        let (ci_lo, ci_hi) = wilson_interval(output_errors, shots_accepted, Z95);
        Self {
            shots_total,
            shots_accepted,
            output_errors,
            p_out_hat,
            discard_ratio,
            ci_lo,
            ci_hi,
            iterations_histogram: Vec::new(),
            unconverged: 0,
        }
    }

    pub fn with_iterations(mut self, histogram: Vec<u64>, unconverged: u64) -> Self {
        self.iterations_histogram = histogram;
        self.unconverged = unconverged;
        self
    }

    /// Shots that needed at most `k` global iterations.
    pub fn shots_within_iterations(&self, k: usize) -> u64 {
        self.iterations_histogram.iter().take(k).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate_and_shrinks() {
        let (lo, hi) = wilson_interval(5, 1000, Z95);
        assert!(lo < 0.005 && 0.005 < hi);
        let (lo2, hi2) = wilson_interval(500, 100_000, Z95);
        assert!(hi2 - lo2 < hi - lo);
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo32, hi32) = wilson_interval(5u64, 1000, Z95 as f32);
        assert!((lo32 as f64 - wilson_interval(5, 1000, Z95).0).abs() < 1e-6);
        assert!(hi32 > lo32);
    }

    #[test]
    fn wilson_known_value() {
        // 10 of 100 at z = 1.96: (0.0552, 0.1744) to 4 places
        let (lo, hi) = wilson_interval(10, 100, 1.96f64);
        assert!((lo - 0.05523).abs() < 1e-4, "{lo}");
        assert!((hi - 0.17437).abs() < 1e-4, "{hi}");
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [0.05f64, 0.1, 0.2, 0.3];
        let ys: Vec<f64> = xs.iter().map(|x| 7.0 * x * x * x).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 3.0).abs() < 1e-12);
        assert!(loglog_slope(&[1.0f64], &[1.0]).is_none());
    }

    #[test]
    fn stats_from_counts() {
        let s = ExperimentStats::from_counts(1000, 900, 9);
        assert!((s.discard_ratio - 0.1).abs() < 1e-12);
        assert!((s.p_out_hat - 0.01).abs() < 1e-12);
        assert!(s.ci_lo <= s.p_out_hat && s.p_out_hat <= s.ci_hi);
        let empty = ExperimentStats::from_counts(0, 0, 0);
        assert_eq!(empty.p_out_hat, 0.0);
    }

    #[test]
    fn sigma_checks() {
        assert!(within_sigma(0.0105f64, 0.01, 100_000, 3.0));
        assert!(!within_sigma(0.02f64, 0.01, 100_000, 3.0));
    }
}
