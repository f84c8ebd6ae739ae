use std::collections::HashMap;

use serde_json::json;
use tracemine::corpus::{weighted_total, RubricWeights};
use tracemine::miner::{unique_pattern_scan, ComparedPattern, UniquePatternReport};
use tracemine::ndarray::Array2;

use super::{common, Report};
use crate::config::PipelineConfig;
use crate::error::CliResult;
use crate::render::{self, dec2};

const HIGH: &str = "Higher Writing Quality";
const LOW: &str = "Lower Writing Quality";

pub fn run(cfg: &PipelineConfig) -> CliResult<Report> {
    let mut rep = Report::default();
    let m = common::mine(cfg, &mut rep)?;
    let scores = common::scores(cfg, &mut rep.outputs)?;
    let scores = common::scores_in(&m.db, scores, &mut rep.warnings);
    let by_id: HashMap<&str, &tracemine::corpus::EssayScores> =
        scores.iter().map(|s| (s.student_id.as_str(), s)).collect();
    let (ids, missing): (Vec<&str>, Vec<&str>) =
        m.db.sequences()
            .iter()
            .map(|s| s.student_id.as_str())
            .partition(|id| by_id.contains_key(id));
    if !missing.is_empty() {
        rep.warnings
            .push(format!("students without scores were left out: {}", missing.join(", ")));
    }

    let dims = &cfg.stats.dims;
    let mut data = Array2::<f64>::zeros((ids.len(), dims.len()));
    for (i, id) in ids.iter().enumerate() {
        for (j, &d) in dims.iter().enumerate() {
            let v = by_id[id]
                .get(d)
                .ok_or_else(|| crate::error::CliError::Invalid(format!("dimension {d} missing for student '{id}'")))?;
            data[[i, j]] = f64::from(v);
        }
    }
    let (curve, assignment) = common::cluster(
        cfg,
        data.view(),
        cfg.clustering.score_k,
        "score clusters",
        &mut rep.warnings,
    )?;
    if let Some(c) = &curve {
        common::elbow_outputs(c, "elbow_scores", &mut rep.outputs)?;
    }
    let k = assignment.k;

    // number clusters by mean weighted total, highest first
    let weights = RubricWeights::default();
    let totals: Vec<f64> = ids
        .iter()
        .map(|id| weighted_total(by_id[id], &weights))
        .collect::<Result<_, _>>()?;
    let sizes = assignment.cluster_sizes();
    let mut mean_total = vec![0.0; k];
    for (&l, t) in assignment.labels.iter().zip(&totals) {
        mean_total[l] += t / sizes[l] as f64;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| mean_total[b].total_cmp(&mean_total[a]).then(a.cmp(&b)));
    let mut rank = vec![0; k];
    for (r, &l) in order.iter().enumerate() {
        rank[l] = r;
    }
    let describe = |r: usize| match (k, r) {
        (2, 0) => HIGH,
        (2, _) => LOW,
        _ => "",
    };

    let rows: Vec<Vec<String>> = ids
        .iter()
        .zip(&assignment.labels)
        .zip(&totals)
        .map(|((id, &l), t)| vec![id.to_string(), (rank[l] + 1).to_string(), t.to_string()])
        .collect();
    rep.outputs.add(
        "score_clusters.csv",
        common::csv_bytes(&["student_id", "cluster", "weighted_total"], &rows)?,
    );

    let mut full = Vec::new();
    let mut md_rows = Vec::new();
    for (r, &l) in order.iter().enumerate() {
        let means: Vec<f64> = (0..dims.len()).map(|j| assignment.centroids[[l, j]]).collect();
        let mut row = vec![(r + 1).to_string()];
        row.extend(means.iter().map(f64::to_string));
        row.push(sizes[l].to_string());
        row.push(mean_total[l].to_string());
        full.push(row);
        let mut md = vec![(r + 1).to_string()];
        md.extend(means.iter().map(|&v| dec2(v)));
        md.push(sizes[l].to_string());
        md.push(describe(r).to_string());
        md_rows.push(md);
    }
    let mut header = vec!["cluster"];
    header.extend(dims.iter().map(|d| d.key()));
    header.extend(["n", "mean_weighted_total"]);
    rep.outputs.add("score_means.csv", common::csv_bytes(&header, &full)?);
    let mut md_header = vec!["Clusters"];
    md_header.extend(dims.iter().map(|d| d.label()));
    md_header.extend(["N", "Group Description"]);
    rep.outputs
        .add_text("score_means.md", render::table(&md_header, &md_rows));

    let mut summary = json!({
        "students": ids.len(),
        "k": k,
        "k_source": if curve.is_some() { "elbow" } else { "override" },
        "cluster_sizes": order.iter().map(|&l| sizes[l]).collect::<Vec<_>>(),
        "minsup_grid": cfg.mining.minsup_grid,
        "first_unique_pct": null,
    });
    if k != 2 {
        rep.warnings.push(format!(
            "unique-pattern scan skipped: it needs exactly 2 clusters, found {k}"
        ));
        rep.outputs.add_json("summary.json", &summary);
        return Ok(rep);
    }
    let members = |r: usize| -> Vec<&str> {
        ids.iter()
            .zip(&assignment.labels)
            .filter(|(_, &l)| rank[l] == r)
            .map(|(id, _)| *id)
            .collect()
    };
    let high = m.db.subset(members(0));
    let low = m.db.subset(members(1));
    let report = unique_pattern_scan(&high, &low, &cfg.mining.minsup_grid, common::mining_opts(cfg))?;
    unique_outputs(&report, &mut rep)?;
    summary["first_unique_pct"] = json!(report.first_unique_pct);
    match report.first_unique_pct {
        Some(p) => rep.summary.push(format!("unique patterns first appear at {p}% minsup")),
        None => rep.summary.push("no unique patterns at any grid value".into()),
    }
    rep.summary
        .push(format!("score clusters: {} higher, {} lower", high.len(), low.len()));
    rep.outputs.add_json("summary.json", &summary);
    Ok(rep)
}

fn unique_outputs(report: &UniquePatternReport, rep: &mut Report) -> CliResult<()> {
    let opt = |s: Option<usize>| s.map(|v| v.to_string()).unwrap_or_default();
    let mut full = Vec::new();
    let mut md = String::new();
    for s in &report.sections {
        let groups: [(&str, &[ComparedPattern]); 3] = [
            ("shared", &s.shared),
            ("unique_1", &s.unique_a),
            ("unique_2", &s.unique_b),
        ];
        for (status, list) in groups {
            for c in list {
                full.push(vec![
                    s.minsup_pct.to_string(),
                    c.pattern.joined(),
                    status.to_string(),
                    opt(c.support_a),
                    opt(c.support_b),
                    c.raw_support_a.to_string(),
                    c.raw_support_b.to_string(),
                    s.min_count_a.to_string(),
                    s.min_count_b.to_string(),
                ]);
            }
        }
        let shown = |v: Option<usize>| v.unwrap_or(0).to_string();
        let mut rows: Vec<Vec<String>> = Vec::new();
        for (marker, list) in [("", &s.shared), ("*", &s.unique_a), ("**", &s.unique_b)] {
            for c in list.iter() {
                rows.push(vec![
                    format!("{}{marker}", c.pattern),
                    shown(c.support_a),
                    shown(c.support_b),
                ]);
            }
        }
        md.push_str(&format!(
            "### {}% minsup (support >= {} of {} in cluster 1, >= {} of {} in cluster 2)\n\n",
            s.minsup_pct, s.min_count_a, report.n_a, s.min_count_b, report.n_b
        ));
        md.push_str(&render::table(
            &["Pattern", &format!("Cluster 1 ({HIGH})"), &format!("Cluster 2 ({LOW})")],
            &rows,
        ));
        md.push_str(&format!(
            "\n{} shared, {} unique to cluster 1 (*), {} unique to cluster 2 (**)\n\n",
            s.shared.len(),
            s.unique_a.len(),
            s.unique_b.len()
        ));
    }
    let header = [
        "minsup_pct",
        "pattern",
        "status",
        "support_1",
        "support_2",
        "raw_support_1",
        "raw_support_2",
        "min_count_1",
        "min_count_2",
    ];
    rep.outputs
        .add("unique_patterns.csv", common::csv_bytes(&header, &full)?);
    rep.outputs.add_text("unique_patterns.md", md);
    Ok(())
}
