//! Small statistics helpers: Pearson chi-square, binomial and sample-mean
//! standard errors.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareSummary {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Number of groups contributing to the statistic.
    pub classes: usize,
}

/// Right-tail probability of the chi-square distribution.
pub fn chi_square_p_value(statistic: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    ChiSquared::new(df as f64)
        .expect("df > 0")
        .sf(statistic)
}

/// Pearson goodness of fit of `counts` against the uniform law on its cells.
pub fn chi_square_uniform(counts: &[u64]) -> ChiSquareSummary {
    let total: u64 = counts.iter().sum();
    let k = counts.len();
    let expected = total as f64 / k as f64;
    let statistic = if expected > 0.0 {
        counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum()
    } else {
        0.0
    };
    let df = k.saturating_sub(1);
    ChiSquareSummary {
        statistic,
        df,
        p_value: chi_square_p_value(statistic, df),
        classes: 1,
    }
}

/// Standard deviation of a binomial proportion estimate.
pub fn binomial_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Mean and standard error of the mean.
pub fn mean_and_sem(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
