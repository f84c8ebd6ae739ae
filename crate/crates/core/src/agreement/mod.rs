//! Inter-rater agreement: Gwet's AC1 for two raters over nominal codes and
//! Kendall's coefficient of concordance W for m raters ranking n items.

mod ac1;
mod kendall;

pub use ac1::gwet_ac1;
pub use kendall::{kendalls_w, scores_to_ranks};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AgreementKind {
    Ac1,
    KendallW,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementResult {
    pub statistic: f64,
    pub kind: AgreementKind,
    pub n_items: usize,
    pub n_raters: usize,
    /// Size of the category set used for chance agreement (AC1 only).
    pub n_categories: Option<usize>,
    /// Whether the tie correction was applied (W only).
    pub tie_corrected: Option<bool>,
    /// Observed and chance agreement (AC1 only).
    pub observed: Option<f64>,
    pub chance: Option<f64>,
}
