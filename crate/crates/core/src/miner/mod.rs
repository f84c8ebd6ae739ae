//! Frequent sequential pattern mining (PrefixSpan), occurrence counting,
//! per-student feature matrices and cross-group unique-pattern scans.

mod features;
mod occurrence;
mod pattern;
mod prefixspan;
mod unique;

pub use features::{feature_matrix, FeatureMatrix};
pub use occurrence::{contains, contains_within, count_nonoverlapping, count_nonoverlapping_within};
pub use pattern::{read_pattern_csv, report_order, FrequentPattern, FrequentPatternSet, Pattern};
pub use prefixspan::{min_support_threshold, prefixspan, prefixspan_pct, MiningOptions};
pub use unique::{unique_pattern_scan, ComparedPattern, GridSection, UniquePatternReport};
