use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use super::{AgreementKind, AgreementResult};
use crate::error::{Error, Result};

/// Gwet's AC1 for two raters.
///
/// `categories` fixes the category set K used for chance agreement; with
/// `None` the categories observed in either labeling are used.
pub fn gwet_ac1<T: Eq + Hash>(labels_a: &[T], labels_b: &[T], categories: Option<&[T]>) -> Result<AgreementResult> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::invalid(format!(
            "label lists differ in length ({} vs {})",
            labels_a.len(),
            labels_b.len()
        )));
    }
    let n = labels_a.len();
    if n < 2 {
        return Err(Error::invalid("need at least two rated items"));
    }
    let observed: HashSet<&T> = labels_a.iter().chain(labels_b).collect();
    if observed.len() < 2 {
        return Err(Error::Degenerate("fewer than two categories in use".into()));
    }
    let k = match categories {
        Some(set) => {
            let set: HashSet<&T> = set.iter().collect();
            if !observed.is_subset(&set) {
                return Err(Error::invalid("a label is outside the declared category set"));
            }
            set.len()
        }
        None => observed.len(),
    };

    // counts in first-appearance order so the float sum is reproducible
    let mut slot: HashMap<&T, usize> = HashMap::new();
    let mut counts: Vec<usize> = Vec::new();
    for label in labels_a.iter().chain(labels_b) {
        let i = *slot.entry(label).or_insert_with(|| {
            counts.push(0);
            counts.len() - 1
        });
        counts[i] += 1;
    }
    let agree = labels_a.iter().zip(labels_b).filter(|(a, b)| a == b).count();
    let pa = agree as f64 / n as f64;
    let two_n = 2.0 * n as f64;
    let pe = counts
        .iter()
        .map(|&c| {
            let pi = c as f64 / two_n;
            pi * (1.0 - pi)
        })
        .sum::<f64>()
        / (k - 1) as f64;
    if (1.0 - pe).abs() < f64::EPSILON {
        return Err(Error::Degenerate("chance agreement equals 1".into()));
    }
    Ok(AgreementResult {
        statistic: (pa - pe) / (1.0 - pe),
        kind: AgreementKind::Ac1,
        n_items: n,
        n_raters: 2,
        n_categories: Some(k),
        tie_corrected: None,
        observed: Some(pa),
        chance: Some(pe),
    })
}
