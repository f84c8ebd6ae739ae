use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

fn pairs(n: u64) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

/// Adjusted Rand index between two labelings of the same items.
///
/// Returns 1 when both labelings are the same trivial partition (the index is
/// otherwise undefined there).
pub fn adjusted_rand_index<A, B>(labels_a: &[A], labels_b: &[B]) -> Result<f64>
where
    A: Eq + Hash,
    B: Eq + Hash,
{
    if labels_a.len() != labels_b.len() {
        return Err(Error::invalid(format!(
            "labelings have different lengths ({} vs {})",
            labels_a.len(),
            labels_b.len()
        )));
    }
    let n = labels_a.len();
    if n < 2 {
        return Err(Error::invalid("need at least two items"));
    }
    let mut ids_a: HashMap<&A, usize> = HashMap::new();
    let mut ids_b: HashMap<&B, usize> = HashMap::new();
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    for (a, b) in labels_a.iter().zip(labels_b) {
        let na = ids_a.len();
        let ia = *ids_a.entry(a).or_insert(na);
        let nb = ids_b.len();
        let ib = *ids_b.entry(b).or_insert(nb);
        *table.entry((ia, ib)).or_default() += 1;
    }
    let mut rows = vec![0u64; ids_a.len()];
    let mut cols = vec![0u64; ids_b.len()];
    for (&(i, j), &c) in &table {
        rows[i] += c;
        cols[j] += c;
    }
    let index: f64 = table.values().map(|&c| pairs(c)).sum();
    let sum_a: f64 = rows.iter().map(|&c| pairs(c)).sum();
    let sum_b: f64 = cols.iter().map(|&c| pairs(c)).sum();
    let expected = sum_a * sum_b / pairs(n as u64);
    let max = 0.5 * (sum_a + sum_b);
    let denom = max - expected;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}
