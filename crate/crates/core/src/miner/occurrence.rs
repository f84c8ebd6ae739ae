//! Containment and per-sequence occurrence counting.
//!
//! A gap is the number of sequence positions skipped between two consecutive
//! matched elements. `max_gap = None` allows any gap; `Some(0)` requires the
//! match to be contiguous.

fn within(prev: usize, next: usize, max_gap: Option<usize>) -> bool {
    prev < next && max_gap.is_none_or(|g| next - prev - 1 <= g)
}

/// True iff `pattern` occurs in `sequence` in order, gaps allowed.
pub fn contains<T: PartialEq>(sequence: &[T], pattern: &[T]) -> bool {
    let mut it = sequence.iter();
    pattern.iter().all(|p| it.any(|s| s == p))
}

/// [`contains`] with an optional bound on each gap.
pub fn contains_within<T: PartialEq>(sequence: &[T], pattern: &[T], max_gap: Option<usize>) -> bool {
    if max_gap.is_none() {
        return contains(sequence, pattern);
    }
    let free = vec![true; sequence.len()];
    !reachable_levels(sequence, pattern, &free, max_gap)
        .last()
        .is_none_or(Vec::is_empty)
}

/// Number of greedy leftmost non-overlapping embeddings of `pattern`.
///
/// Each round takes the earliest complete embedding among elements not used
/// by an earlier round; counting stops when no embedding remains.
pub fn count_nonoverlapping<T: PartialEq>(sequence: &[T], pattern: &[T]) -> usize {
    if pattern.is_empty() || pattern.len() > sequence.len() {
        return 0;
    }
    let mut used = vec![false; sequence.len()];
    let mut picked = Vec::with_capacity(pattern.len());
    let mut count = 0;
    loop {
        picked.clear();
        let mut k = 0;
        for (i, s) in sequence.iter().enumerate() {
            if !used[i] && *s == pattern[k] {
                picked.push(i);
                k += 1;
                if k == pattern.len() {
                    break;
                }
            }
        }
        if k < pattern.len() {
            return count;
        }
        for &i in &picked {
            used[i] = true;
        }
        count += 1;
    }
}

/// [`count_nonoverlapping`] with an optional bound on each gap. Gaps are
/// measured in original sequence positions, including positions consumed by
/// earlier rounds. Each round takes the embedding with the earliest end,
/// and among those the lexicographically smallest one.
pub fn count_nonoverlapping_within<T: PartialEq>(sequence: &[T], pattern: &[T], max_gap: Option<usize>) -> usize {
    if max_gap.is_none() {
        return count_nonoverlapping(sequence, pattern);
    }
    if pattern.is_empty() || pattern.len() > sequence.len() {
        return 0;
    }
    let mut free = vec![true; sequence.len()];
    let mut count = 0;
    while let Some(embedding) = earliest_embedding(sequence, pattern, &free, max_gap) {
        for i in embedding {
            free[i] = false;
        }
        count += 1;
    }
    count
}

/// For each pattern position, the sorted sequence positions at which a valid
/// partial embedding can end.
fn reachable_levels<T: PartialEq>(
    sequence: &[T],
    pattern: &[T],
    free: &[bool],
    max_gap: Option<usize>,
) -> Vec<Vec<usize>> {
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(pattern.len());
    for (k, p) in pattern.iter().enumerate() {
        let candidates = sequence
            .iter()
            .enumerate()
            .filter(|(i, s)| free[*i] && *s == p)
            .map(|(i, _)| i);
        let level: Vec<usize> = if k == 0 {
            candidates.collect()
        } else {
            let prev = &levels[k - 1];
            // nearest predecessor strictly before j is the tightest gap
            let mut cursor = 0;
            candidates
                .filter(|&j| {
                    while cursor + 1 < prev.len() && prev[cursor + 1] < j {
                        cursor += 1;
                    }
                    !prev.is_empty() && within(prev[cursor], j, max_gap)
                })
                .collect()
        };
        if level.is_empty() {
            levels.push(level);
            break;
        }
        levels.push(level);
    }
    levels
}

fn earliest_embedding<T: PartialEq>(
    sequence: &[T],
    pattern: &[T],
    free: &[bool],
    max_gap: Option<usize>,
) -> Option<Vec<usize>> {
    let levels = reachable_levels(sequence, pattern, free, max_gap);
    if levels.len() < pattern.len() {
        return None;
    }
    let end = *levels.last()?.first()?;

    // backward pass: positions that can still reach `end`
    let m = pattern.len();
    let mut viable: Vec<Vec<usize>> = vec![Vec::new(); m];
    viable[m - 1] = vec![end];
    for k in (0..m - 1).rev() {
        let next = &viable[k + 1];
        viable[k] = levels[k]
            .iter()
            .copied()
            .filter(|&i| next.iter().any(|&j| within(i, j, max_gap)))
            .collect();
    }

    let mut out = Vec::with_capacity(m);
    let mut prev: Option<usize> = None;
    for level in &viable {
        let pick = level
            .iter()
            .copied()
            .find(|&i| prev.is_none_or(|p| within(p, i, max_gap)))?;
        out.push(pick);
        prev = Some(pick);
    }
    Some(out)
}
