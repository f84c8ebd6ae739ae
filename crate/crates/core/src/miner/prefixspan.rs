use crate::corpus::SequenceDatabase;
use crate::error::{Error, Result};

use super::pattern::{report_order, FrequentPattern, FrequentPatternSet, Pattern};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MiningOptions {
    /// Longest pattern to report; `None` is unrestricted.
    pub max_len: Option<usize>,
    /// Largest allowed gap between consecutive matched elements.
    pub max_gap: Option<usize>,
}

/// Absolute support threshold: `ceil(minsup_pct / 100 * n_sequences)`.
pub fn min_support_threshold(n_sequences: usize, minsup_pct: f64) -> Result<usize> {
    if n_sequences == 0 {
        return Err(Error::invalid("number of sequences must be positive"));
    }
    if !(minsup_pct > 0.0 && minsup_pct <= 100.0) {
        return Err(Error::invalid(format!("minsup {minsup_pct}% is outside (0, 100]")));
    }
    let raw = minsup_pct * n_sequences as f64 / 100.0;
    let nearest = raw.round();
    // 70% of 10 must be 7, not ceil(7.000000000000001)
    let count = if (raw - nearest).abs() < 1e-9 {
        nearest
    } else {
        raw.ceil()
    };
    Ok((count as usize).max(1))
}

/// A projected suffix: sequence id plus the positions where the current
/// prefix can end. Without a gap bound only the earliest end is kept, which
/// makes this the usual pseudo-projection (sequence, offset) pair.
struct Projected {
    seq: usize,
    ends: Vec<usize>,
}

struct Miner<'a> {
    sequences: Vec<Vec<u32>>,
    symbols: Vec<&'a str>,
    min_count: usize,
    opts: MiningOptions,
    found: Vec<(Vec<u32>, usize)>,
}

impl Miner<'_> {
    /// Positions in `seq` where `item` may extend a prefix ending at `ends`.
    fn extensions(&self, seq: usize, ends: &[usize], item: u32) -> Vec<usize> {
        let s = &self.sequences[seq];
        match self.opts.max_gap {
            None => {
                let from = ends.first().map_or(0, |e| e + 1);
                s[from..]
                    .iter()
                    .position(|&x| x == item)
                    .map(|p| vec![from + p])
                    .unwrap_or_default()
            }
            Some(g) => {
                if ends.is_empty() {
                    return (0..s.len()).filter(|&j| s[j] == item).collect();
                }
                let mut out = Vec::new();
                for &e in ends {
                    let hi = e.saturating_add(1).saturating_add(g).min(s.len() - 1);
                    for (j, &x) in s.iter().enumerate().take(hi + 1).skip(e + 1) {
                        if x == item && out.last().is_none_or(|&l| l < j) {
                            out.push(j);
                        }
                    }
                }
                out
            }
        }
    }

    /// Items that can extend each projected entry, counted once per sequence.
    fn item_supports(&self, projected: &[Projected]) -> Vec<usize> {
        let mut counts = vec![0usize; self.symbols.len()];
        let mut seen = vec![usize::MAX; self.symbols.len()];
        for p in projected {
            let s = &self.sequences[p.seq];
            let window: Box<dyn Iterator<Item = usize>> = match (self.opts.max_gap, p.ends.first()) {
                (_, None) => Box::new(0..s.len()),
                (None, Some(&e)) => Box::new(e + 1..s.len()),
                (Some(g), Some(_)) => Box::new(
                    p.ends
                        .iter()
                        .flat_map(move |&e| (e + 1)..e.saturating_add(2).saturating_add(g).min(s.len())),
                ),
            };
            for j in window {
                let item = s[j] as usize;
                if seen[item] != p.seq {
                    seen[item] = p.seq;
                    counts[item] += 1;
                }
            }
        }
        counts
    }

    fn grow(&mut self, prefix: &mut Vec<u32>, projected: &[Projected]) {
        if self.opts.max_len.is_some_and(|m| prefix.len() >= m) {
            return;
        }
        let supports = self.item_supports(projected);
        for (item, &support) in supports.iter().enumerate() {
            if support < self.min_count {
                continue;
            }
            let item = item as u32;
            let next: Vec<Projected> = projected
                .iter()
                .filter_map(|p| {
                    let ends = self.extensions(p.seq, &p.ends, item);
                    (!ends.is_empty()).then_some(Projected { seq: p.seq, ends })
                })
                .collect();
            debug_assert_eq!(next.len(), support);
            prefix.push(item);
            self.found.push((prefix.clone(), support));
            self.grow(prefix, &next);
            prefix.pop();
        }
    }
}

/// Mines every sequential pattern whose sequence support is at least
/// `min_count`, by recursive prefix projection.
pub fn prefixspan(db: &SequenceDatabase, min_count: usize, opts: MiningOptions) -> Result<FrequentPatternSet> {
    if min_count == 0 {
        return Err(Error::invalid("min_count must be positive"));
    }
    let symbols: Vec<&str> = db.alphabet().iter().map(String::as_str).collect();
    let encode = |code: &str| symbols.binary_search(&code).expect("alphabet covers database") as u32;
    let sequences: Vec<Vec<u32>> = db
        .sequences()
        .iter()
        .map(|s| s.codes.iter().map(|c| encode(c)).collect())
        .collect();

    let mut miner = Miner {
        sequences,
        symbols,
        min_count,
        opts,
        found: Vec::new(),
    };
    if min_count <= db.len() && opts.max_len != Some(0) {
        let root: Vec<Projected> = (0..db.len()).map(|seq| Projected { seq, ends: Vec::new() }).collect();
        miner.grow(&mut Vec::new(), &root);
    }

    let mut patterns: Vec<FrequentPattern> = miner
        .found
        .iter()
        .map(|(items, support)| FrequentPattern {
            pattern: Pattern::new(items.iter().map(|&i| miner.symbols[i as usize])).expect("non-empty"),
            support: *support,
        })
        .collect();
    patterns.sort_by(report_order);

    Ok(FrequentPatternSet {
        patterns,
        min_count,
        minsup_pct: None,
        n_sequences: db.len(),
    })
}

/// [`prefixspan`] with a relative threshold.
pub fn prefixspan_pct(db: &SequenceDatabase, minsup_pct: f64, opts: MiningOptions) -> Result<FrequentPatternSet> {
    if db.is_empty() {
        min_support_threshold(1, minsup_pct)?;
        return Ok(FrequentPatternSet {
            patterns: Vec::new(),
            min_count: 0,
            minsup_pct: Some(minsup_pct),
            n_sequences: 0,
        });
    }
    let min_count = min_support_threshold(db.len(), minsup_pct)?;
    let mut set = prefixspan(db, min_count, opts)?;
    set.minsup_pct = Some(minsup_pct);
    Ok(set)
}
