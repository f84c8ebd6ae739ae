//! Two-group rank tests with Holm family correction, effect sizes and a
//! Shapiro-Wilk normality check.

mod compare;
mod descriptive;
mod holm;
mod mann_whitney;
mod shapiro;

pub use compare::{compare_clusters, ClusterComparison, DimensionTest, SMALL_GROUP};
pub use descriptive::Descriptives;
pub use holm::holm_adjust;
pub use mann_whitney::{exact_p, mann_whitney_u, midranks, two_sided_p, u_distribution, TestResult, EXACT_MAX_N};
pub use shapiro::{shapiro_wilk, NormalityResult};

use crate::error::{Error, Result};

/// Effect size `r = |z| / sqrt(n_total)`.
pub fn effect_size_r(z: f64, n_total: usize) -> Result<f64> {
    if n_total == 0 {
        return Err(Error::invalid("n_total must be positive"));
    }
    Ok(z.abs() / (n_total as f64).sqrt())
}

/// Normality pre-check used before choosing a rank test.
pub fn normality_check(sample: &[f64]) -> Result<NormalityResult> {
    shapiro_wilk(sample)
}
