use super::{AgreementKind, AgreementResult};
use crate::error::{Error, Result};
use crate::stats::midranks;

/// Midrank transform of each rater's raw scores.
pub fn scores_to_ranks(raw: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let Some(first) = raw.first() else {
        return Ok(Vec::new());
    };
    if raw.iter().any(|r| r.len() != first.len()) {
        return Err(Error::invalid("raters scored different numbers of items"));
    }
    if raw.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::invalid("scores must be finite numbers"));
    }
    Ok(raw.iter().map(|r| midranks(r).0).collect())
}

/// Kendall's W for `ranks`, one row per rater and one column per item.
///
/// With `tie_correct` the denominator subtracts `m * sum(t^3 - t)` over every
/// rater's tie groups.
pub fn kendalls_w(ranks: &[Vec<f64>], tie_correct: bool) -> Result<AgreementResult> {
    let m = ranks.len();
    if m < 2 {
        return Err(Error::invalid("need at least two raters"));
    }
    let n = ranks[0].len();
    if n < 2 {
        return Err(Error::invalid("need at least two items"));
    }
    let mut ties = 0.0;
    for (i, row) in ranks.iter().enumerate() {
        if row.len() != n {
            return Err(Error::invalid(format!(
                "rater {} ranked {} items, expected {n}",
                i + 1,
                row.len()
            )));
        }
        let (expected, t, _) = midranks(row);
        if row.iter().zip(&expected).any(|(a, b)| (a - b).abs() > 1e-9) {
            return Err(Error::invalid(format!(
                "rater {} row is not a midrank ranking of 1..{n}",
                i + 1
            )));
        }
        ties += t;
    }
    let rank_sums: Vec<f64> = (0..n).map(|j| ranks.iter().map(|r| r[j]).sum()).collect();
    let mean = rank_sums.iter().sum::<f64>() / n as f64;
    let s: f64 = rank_sums.iter().map(|r| (r - mean) * (r - mean)).sum();
    let (mf, nf) = (m as f64, n as f64);
    let mut denom = mf * mf * (nf * nf * nf - nf);
    if tie_correct {
        denom -= mf * ties;
    }
    if denom <= 0.0 {
        return Err(Error::Degenerate("every rater tied every item".into()));
    }
    Ok(AgreementResult {
        statistic: (12.0 * s / denom).clamp(0.0, 1.0),
        kind: AgreementKind::KendallW,
        n_items: n,
        n_raters: m,
        n_categories: None,
        tie_corrected: Some(tie_correct),
        observed: None,
        chance: None,
    })
}
