use serde_json::json;

use super::{common, Report};
use crate::config::PipelineConfig;
use crate::error::CliResult;

pub fn run(cfg: &PipelineConfig) -> CliResult<Report> {
    let mut rep = Report::default();
    let m = common::mine(cfg, &mut rep)?;
    if m.db.is_empty() {
        // an empty log is a valid, if uninteresting, input
        rep.notices
            .push("the log holds no events; the pattern table is empty".into());
    }
    rep.outputs.add_json(
        "summary.json",
        &json!({
            "students": m.db.len(),
            "elements": m.db.total_elements(),
            "minsup_pct": cfg.mining.minsup_pct,
            "min_count": m.patterns.min_count,
            "patterns": m.patterns.len(),
        }),
    );
    rep.summary.push(format!(
        "{} frequent patterns over {} students (support >= {})",
        m.patterns.len(),
        m.db.len(),
        m.patterns.min_count
    ));
    Ok(rep)
}
