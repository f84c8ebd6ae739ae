use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::descriptive::Descriptives;
use crate::error::{Error, Result};

/// Pooled size up to which a tie-free test also gets an exact p-value.
pub const EXACT_MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    /// Reported statistic, `min(u1, u2)`.
    pub u: f64,
    /// `n1 n2 + n1 (n1 + 1) / 2 - R1`.
    pub u1: f64,
    pub u2: f64,
    /// Normal approximation with tie correction, no continuity correction.
    /// Non-positive because `u` is the smaller of the two statistics.
    pub z: f64,
    pub p_two_sided: f64,
    /// Exact two-sided p from the permutation distribution, for small
    /// tie-free samples.
    pub p_exact: Option<f64>,
    /// Family-wise adjusted p; equals `p_two_sided` until a correction runs.
    pub p_adjusted: f64,
    pub r_effect: f64,
    pub n1: usize,
    pub n2: usize,
    pub tie_groups: usize,
    /// Every pooled value identical; the statistic carries no information.
    pub degenerate: bool,
    pub group_a: Descriptives,
    pub group_b: Descriptives,
}

/// Average ranks (1-based) of `values`, plus `sum(t^3 - t)` over tie groups and
/// the number of tie groups.
pub fn midranks(values: &[f64]) -> (Vec<f64>, f64, usize) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut tie_sum = 0.0;
    let mut groups = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        let t = (j - i) as f64;
        if j - i > 1 {
            tie_sum += t * t * t - t;
            groups += 1;
        }
        i = j;
    }
    (ranks, tie_sum, groups)
}

pub(crate) fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Two-sided p-value for a standard normal deviate.
pub fn two_sided_p(z: f64) -> f64 {
    (2.0 * standard_normal().cdf(-z.abs())).min(1.0)
}

/// Number of ways to pick `n1` of `n1 + n2` distinct ranks giving each value of
/// U, for U in `0..=n1*n2`.
pub fn u_distribution(n1: usize, n2: usize) -> Vec<f64> {
    // f(u; a, b) = f(u - b; a - 1, b) + f(u; a, b - 1), with f(0; a, 0) = 1.
    // `table[a]` holds f(.; a, b) for the current b.
    let max = n1 * n2;
    let mut table: Vec<Vec<f64>> = (0..=n1)
        .map(|_| {
            let mut v = vec![0.0; max + 1];
            v[0] = 1.0;
            v
        })
        .collect();
    for b in 1..=n2 {
        for a in 1..=n1 {
            let mut next = vec![0.0; max + 1];
            for (u, slot) in next.iter_mut().enumerate().take(a * b + 1) {
                let larger_last = if u >= b { table[a - 1][u - b] } else { 0.0 };
                *slot = larger_last + table[a][u];
            }
            table[a] = next;
        }
    }
    table.swap_remove(n1)
}

/// Exact two-sided p for an integer `u_min` (the smaller statistic).
pub fn exact_p(u_min: usize, n1: usize, n2: usize) -> f64 {
    let dist = u_distribution(n1, n2);
    let total: f64 = dist.iter().sum();
    let tail: f64 = dist.iter().take(u_min + 1).sum();
    (2.0 * tail / total).min(1.0)
}

pub fn mann_whitney_u(group_a: &[f64], group_b: &[f64]) -> Result<TestResult> {
    let (n1, n2) = (group_a.len(), group_b.len());
    if n1 == 0 || n2 == 0 {
        return Err(Error::invalid("both groups need at least one value"));
    }
    if n1 + n2 < 3 {
        return Err(Error::invalid("need at least three values in total"));
    }
    if group_a.iter().chain(group_b).any(|x| !x.is_finite()) {
        return Err(Error::invalid("values must be finite"));
    }
    let pooled: Vec<f64> = group_a.iter().chain(group_b).copied().collect();
    let (ranks, tie_sum, tie_groups) = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let (f1, f2) = (n1 as f64, n2 as f64);
    let n = f1 + f2;
    let u1 = f1 * f2 + f1 * (f1 + 1.0) / 2.0 - r1;
    let u2 = f1 * f2 - u1;
    let u = u1.min(u2);

    let variance = (f1 * f2 / 12.0) * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
    let degenerate = variance <= 0.0;
    let (z, p) = if degenerate {
        (0.0, 1.0)
    } else {
        let z = (u - f1 * f2 / 2.0) / variance.sqrt();
        (z, two_sided_p(z))
    };
    let p_exact = (tie_groups == 0 && n1 + n2 <= EXACT_MAX_N).then(|| exact_p(u as usize, n1, n2));

    Ok(TestResult {
        u,
        u1,
        u2,
        z,
        p_two_sided: p,
        p_exact,
        p_adjusted: p,
        r_effect: super::effect_size_r(z, n1 + n2)?,
        n1,
        n2,
        tie_groups,
        degenerate,
        group_a: Descriptives::of(group_a),
        group_b: Descriptives::of(group_b),
    })
}
