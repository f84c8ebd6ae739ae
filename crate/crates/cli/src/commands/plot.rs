use tracemine::corpus::Dimension;

use super::{common, Report};
use crate::config::PipelineConfig;
use crate::error::CliResult;
use crate::plots;

/// Charts of the pattern supports, the elbow curve and, when scores are
/// configured, the score distribution per behavior cluster.
pub fn run(cfg: &PipelineConfig) -> CliResult<Report> {
    let mut rep = Report::default();
    let m = common::mine(cfg, &mut rep)?;
    let bars: Vec<(String, usize)> = m.patterns.iter().map(|f| (f.pattern.to_string(), f.support)).collect();
    rep.outputs.add_text("patterns.svg", plots::support_bars(&bars));

    let data = m.features.to_array();
    let clustered = if m.patterns.is_empty() {
        rep.warnings.push("no frequent patterns; nothing to cluster".into());
        None
    } else {
        Some(common::cluster(
            cfg,
            data.view(),
            cfg.clustering.k_override,
            "pattern clusters",
            &mut rep.warnings,
        )?)
    };
    let svg = match &clustered {
        Some((Some(curve), _)) => plots::elbow(&curve.points, Some(curve.selected_k)),
        _ => plots::elbow(&[], None),
    };
    rep.outputs.add_text("elbow.svg", svg);

    if let (Some(_), Some((_, assignment))) = (&cfg.paths.scores, &clustered) {
        let scores = common::scores(cfg, &mut rep.outputs)?;
        let scores = common::scores_in(&m.db, scores, &mut rep.warnings);
        let ids: Vec<&str> = m.db.sequences().iter().map(|s| s.student_id.as_str()).collect();
        let dims: Vec<(String, Vec<Vec<f64>>)> = cfg
            .stats
            .dims
            .iter()
            .map(|&d: &Dimension| {
                let mut groups = vec![Vec::new(); assignment.k];
                for s in &scores {
                    let row = ids
                        .iter()
                        .position(|id| *id == s.student_id)
                        .expect("filtered to known students");
                    if let Some(v) = s.get(d) {
                        groups[assignment.labels[row]].push(f64::from(v));
                    }
                }
                (d.label().to_string(), groups)
            })
            .collect();
        let scale = (
            f64::from(tracemine::corpus::SCORE_MIN),
            f64::from(tracemine::corpus::SCORE_MAX),
        );
        rep.outputs.add_text("scores.svg", plots::box_summaries(&dims, scale));
    }
    rep.summary.push(format!("plotted {} patterns", m.patterns.len()));
    Ok(rep)
}
