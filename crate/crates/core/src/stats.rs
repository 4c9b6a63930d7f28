//! Small statistics helpers: Pearson chi-square and Hoeffding intervals.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson statistic of `observed` counts against a uniform expectation.
pub fn chi_square_uniform(observed: &[u64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let expected = total as f64 / observed.len() as f64;
    observed
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Upper critical value of chi-square with `df` degrees of freedom at `alpha`.
pub fn chi_square_critical(df: usize, alpha: f64) -> f64 {
    ChiSquared::new(df as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub df: usize,
}

impl ChiSquareOutcome {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical
    }
}

pub fn chi_square_uniform_test(observed: &[u64], alpha: f64) -> ChiSquareOutcome {
    let df = observed.len() - 1;
    ChiSquareOutcome {
        statistic: chi_square_uniform(observed),
        critical: chi_square_critical(df, alpha),
        df,
    }
}

/// Two-sided Hoeffding half-width `sqrt(ln(2/δ) / (2t))`.
pub fn hoeffding_halfwidth(trials: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}
