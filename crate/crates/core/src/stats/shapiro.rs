//! Shapiro-Wilk W with Royston's approximations for the coefficients and for
//! the null distribution of W (valid for 3 <= n <= 5000).

use serde::Serialize;
use statrs::distribution::ContinuousCDF;

use super::mann_whitney::standard_normal;
use crate::error::{Error, Result};

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalityResult {
    pub statistic: f64,
    pub p: f64,
}

// polynomial coefficients, ascending powers
const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// The upper-half weights `a_1 >= a_2 >= ... > 0` for a sample of size `n`.
fn weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let normal = standard_normal();
    let nf = n as f64;
    // expected normal order statistics of the lower half (negative)
    let m: Vec<f64> = (1..=half)
        .map(|i| normal.inverse_cdf((i as f64 - 0.375) / (nf + 0.25)))
        .collect();
    let summ2 = 2.0 * m.iter().map(|x| x * x).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / nf.sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let mut a = vec![0.0; half];
    a[0] = a1;
    let (first_scaled, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        a[1] = a2;
        let num = summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1];
        let den = 1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2;
        (2, (num / den).sqrt())
    } else {
        let num = summ2 - 2.0 * m[0] * m[0];
        let den = 1.0 - 2.0 * a1 * a1;
        (1, (num / den).sqrt())
    };
    for i in first_scaled..half {
        a[i] = -m[i] / fac;
    }
    a
}

pub fn shapiro_wilk(sample: &[f64]) -> Result<NormalityResult> {
    let n = sample.len();
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::invalid(format!(
            "Shapiro-Wilk needs {MIN_N} <= n <= {MAX_N}, got {n}"
        )));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("sample contains non-finite values"));
    }
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if range <= f64::EPSILON * x[0].abs().max(1.0) {
        return Err(Error::Degenerate("constant sample".into()));
    }
    // rescale for numerical stability; W is scale invariant
    let mean = x.iter().sum::<f64>() / n as f64;
    let scaled: Vec<f64> = x.iter().map(|v| (v - mean) / range).collect();

    let a = weights(n);
    let numerator: f64 = a
        .iter()
        .enumerate()
        .map(|(i, ai)| ai * (scaled[n - 1 - i] - scaled[i]))
        .sum();
    let ssq: f64 = scaled.iter().map(|v| v * v).sum();
    let w = ((numerator * numerator) / ssq).min(1.0);

    let p = if n == 3 {
        let pi6 = 6.0 / std::f64::consts::PI;
        (1.0 - pi6 * w.sqrt().acos()).max(0.0)
    } else {
        let y = (1.0 - w).ln();
        let nf = n as f64;
        let normal = standard_normal();
        if n <= 11 {
            let gamma = poly(&G, nf);
            if y >= gamma {
                1e-19
            } else {
                let y = -(gamma - y).ln();
                let m = poly(&C3, nf);
                let s = poly(&C4, nf).exp();
                normal.sf((y - m) / s)
            }
        } else {
            let ln_n = nf.ln();
            let m = poly(&C5, ln_n);
            let s = poly(&C6, ln_n).exp();
            normal.sf((y - m) / s)
        }
    };
    Ok(NormalityResult { statistic: w, p })
}
