use serde::Serialize;

use crate::corpus::SequenceDatabase;
use crate::error::{Error, Result};

use super::occurrence::contains_within;
use super::pattern::{FrequentPatternSet, Pattern};
use super::prefixspan::{prefixspan_pct, MiningOptions};

/// A pattern frequent in at least one of the two databases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparedPattern {
    pub pattern: Pattern,
    /// Support where frequent, `None` where below threshold.
    pub support_a: Option<usize>,
    pub support_b: Option<usize>,
    /// Sequence support regardless of threshold.
    pub raw_support_a: usize,
    pub raw_support_b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSection {
    pub minsup_pct: f64,
    pub min_count_a: usize,
    pub min_count_b: usize,
    pub shared: Vec<ComparedPattern>,
    pub unique_a: Vec<ComparedPattern>,
    pub unique_b: Vec<ComparedPattern>,
}

impl GridSection {
    pub fn has_unique(&self) -> bool {
        !self.unique_a.is_empty() || !self.unique_b.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquePatternReport {
    pub n_a: usize,
    pub n_b: usize,
    pub sections: Vec<GridSection>,
    /// Smallest grid value with at least one unique pattern.
    pub first_unique_pct: Option<f64>,
}

fn raw_support(db: &SequenceDatabase, pattern: &Pattern, max_gap: Option<usize>) -> usize {
    db.sequences()
        .iter()
        .filter(|s| contains_within(&s.codes, pattern, max_gap))
        .count()
}

fn compare(
    db_a: &SequenceDatabase,
    db_b: &SequenceDatabase,
    fa: &FrequentPatternSet,
    fb: &FrequentPatternSet,
    max_gap: Option<usize>,
) -> (Vec<ComparedPattern>, Vec<ComparedPattern>, Vec<ComparedPattern>) {
    let entry = |pattern: &Pattern| ComparedPattern {
        pattern: pattern.clone(),
        support_a: fa.support_of(pattern),
        support_b: fb.support_of(pattern),
        raw_support_a: raw_support(db_a, pattern, max_gap),
        raw_support_b: raw_support(db_b, pattern, max_gap),
    };
    let mut shared = Vec::new();
    let mut unique_a = Vec::new();
    let mut unique_b = Vec::new();
    for fp in fa.iter() {
        let e = entry(&fp.pattern);
        if e.support_b.is_some() {
            shared.push(e);
        } else {
            unique_a.push(e);
        }
    }
    for fp in fb.iter() {
        if fa.support_of(&fp.pattern).is_none() {
            unique_b.push(entry(&fp.pattern));
        }
    }
    (shared, unique_a, unique_b)
}

/// Mines both databases independently at each grid threshold and splits the
/// results into shared and database-specific patterns.
pub fn unique_pattern_scan(
    db_a: &SequenceDatabase,
    db_b: &SequenceDatabase,
    minsup_grid: &[f64],
    opts: MiningOptions,
) -> Result<UniquePatternReport> {
    if minsup_grid.is_empty() {
        return Err(Error::invalid("minsup grid is empty"));
    }
    if db_a.is_empty() || db_b.is_empty() {
        return Err(Error::invalid("both databases must be non-empty"));
    }
    let mut sections = Vec::with_capacity(minsup_grid.len());
    for &pct in minsup_grid {
        let fa = prefixspan_pct(db_a, pct, opts)?;
        let fb = prefixspan_pct(db_b, pct, opts)?;
        let (shared, unique_a, unique_b) = compare(db_a, db_b, &fa, &fb, opts.max_gap);
        sections.push(GridSection {
            minsup_pct: pct,
            min_count_a: fa.min_count,
            min_count_b: fb.min_count,
            shared,
            unique_a,
            unique_b,
        });
    }
    let first_unique_pct = sections
        .iter()
        .filter(|s| s.has_unique())
        .map(|s| s.minsup_pct)
        .min_by(f64::total_cmp);
    Ok(UniquePatternReport {
        n_a: db_a.len(),
        n_b: db_b.len(),
        sections,
        first_unique_pct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn joined(v: &[ComparedPattern]) -> Vec<String> {
        v.iter().map(|c| c.pattern.joined()).collect()
    }

    #[test]
    fn identical_databases_have_nothing_unique() {
        let db = SequenceDatabase::from_codes([vec!["hec", "hep"], vec!["hec", "w"], vec!["p"]]);
        let r = unique_pattern_scan(&db, &db, &[50.0, 55.0, 60.0, 65.0, 70.0], MiningOptions::default()).unwrap();
        assert!(r.sections.iter().all(|s| !s.has_unique()));
        assert_eq!(r.first_unique_pct, None);
    }

    #[test]
    fn disjoint_singletons() {
        let a = SequenceDatabase::from_codes([vec!["w"], vec!["w"]]);
        let b = SequenceDatabase::from_codes([vec!["p"], vec!["p"]]);
        let r = unique_pattern_scan(&a, &b, &[50.0], MiningOptions::default()).unwrap();
        let s = &r.sections[0];
        assert!(s.shared.is_empty());
        assert_eq!(joined(&s.unique_a), ["w"]);
        assert_eq!(joined(&s.unique_b), ["p"]);
        assert_eq!(s.unique_a[0].raw_support_b, 0);
        assert_eq!(r.first_unique_pct, Some(50.0));
    }

    #[test]
    fn grid_and_inputs_validated() {
        let a = SequenceDatabase::from_codes([vec!["w"]]);
        assert!(unique_pattern_scan(&a, &a, &[], MiningOptions::default()).is_err());
        assert!(unique_pattern_scan(&a, &SequenceDatabase::default(), &[50.0], MiningOptions::default()).is_err());
        assert!(unique_pattern_scan(&a, &a, &[120.0], MiningOptions::default()).is_err());
    }

    #[test]
    fn first_unique_is_smallest_grid_value() {
        // "w" appears in 3 of 4 sequences of a, in 1 of 4 of b
        let a = SequenceDatabase::from_codes([vec!["w", "hec"], vec!["w"], vec!["w"], vec!["hec"]]);
        let b = SequenceDatabase::from_codes([vec!["w", "hec"], vec!["hec"], vec!["hec"], vec!["hec"]]);
        let r = unique_pattern_scan(&a, &b, &[70.0, 25.0, 50.0], MiningOptions::default()).unwrap();
        // 25%: w frequent in both; 50%: w only in a, hec in both
        assert!(!r.sections[1].has_unique());
        assert_eq!(joined(&r.sections[2].unique_a), ["w"]);
        assert_eq!(r.first_unique_pct, Some(50.0));
    }
}
