use std::collections::HashMap;

use serde_json::json;
use tracemine::stats::{compare_clusters, normality_check, ClusterComparison};

use super::{common, Report};
use crate::config::PipelineConfig;
use crate::error::CliResult;
use crate::render::{self, dec2};

pub fn run(cfg: &PipelineConfig) -> CliResult<Report> {
    let mut rep = Report::default();
    let m = common::mine(cfg, &mut rep)?;
    if m.patterns.is_empty() {
        rep.warnings.push("no frequent patterns; nothing to cluster".into());
        return Ok(rep);
    }
    let data = m.features.to_array();
    normality(&m.features, &mut rep)?;

    let (curve, assignment) = common::cluster(
        cfg,
        data.view(),
        cfg.clustering.k_override,
        "interaction clusters",
        &mut rep.warnings,
    )?;
    if let Some(c) = &curve {
        common::elbow_outputs(c, "elbow", &mut rep.outputs)?;
    }
    let k = assignment.k;
    let ids = &m.features.rows;
    let rows: Vec<Vec<String>> = ids
        .iter()
        .zip(&assignment.labels)
        .map(|(id, l)| vec![id.clone(), (l + 1).to_string()])
        .collect();
    rep.outputs
        .add("clusters.csv", common::csv_bytes(&["student_id", "cluster"], &rows)?);

    // per-cluster feature means
    let sizes = assignment.cluster_sizes();
    let means: Vec<Vec<f64>> = (0..m.features.n_cols())
        .map(|j| {
            let mut sums = vec![0.0; k];
            for (i, &l) in assignment.labels.iter().enumerate() {
                sums[l] += f64::from(m.features.get(i, j));
            }
            sums.iter().zip(&sizes).map(|(s, &n)| s / n as f64).collect()
        })
        .collect();
    let cluster_names: Vec<String> = (1..=k).map(|c| format!("cluster_{c}")).collect();
    let mut header = vec!["pattern"];
    header.extend(cluster_names.iter().map(String::as_str));
    let full: Vec<Vec<String>> = m
        .features
        .columns
        .iter()
        .zip(&means)
        .map(|(p, row)| {
            std::iter::once(p.joined())
                .chain(row.iter().map(f64::to_string))
                .collect()
        })
        .collect();
    rep.outputs.add("cluster_means.csv", common::csv_bytes(&header, &full)?);
    let titles: Vec<String> = (1..=k).map(|c| format!("Cluster {c}")).collect();
    let mut md_header = vec!["Frequent Pattern"];
    md_header.extend(titles.iter().map(String::as_str));
    let mut md_rows: Vec<Vec<String>> = m
        .features
        .columns
        .iter()
        .zip(&means)
        .map(|(p, row)| {
            std::iter::once(p.to_string())
                .chain(row.iter().map(|&v| render::int(v)))
                .collect()
        })
        .collect();
    md_rows.push(
        std::iter::once("N (each cluster)".to_string())
            .chain(sizes.iter().map(usize::to_string))
            .collect(),
    );
    rep.outputs
        .add_text("cluster_means.md", render::table(&md_header, &md_rows));

    rep.summary.push(format!(
        "{} patterns, {k} clusters of sizes {sizes:?}",
        m.patterns.len()
    ));
    let mut summary = json!({
        "students": m.db.len(),
        "patterns": m.patterns.len(),
        "k": k,
        "k_source": if curve.is_some() { "elbow" } else { "override" },
        "cluster_sizes": sizes,
        "wcss": assignment.wcss,
        "stats": null,
    });

    if k != 2 {
        rep.warnings.push(format!(
            "score comparison skipped: it needs exactly 2 clusters, found {k}"
        ));
    } else {
        let scores = common::scores(cfg, &mut rep.outputs)?;
        let scores = common::scores_in(&m.db, scores, &mut rep.warnings);
        let labels: HashMap<String, usize> = ids.iter().cloned().zip(assignment.labels.iter().copied()).collect();
        let cmp = compare_clusters(&scores, &labels, &cfg.stats.dims)?;
        rep.warnings.extend(cmp.warnings.iter().cloned());
        let significant: Vec<&str> = cmp
            .rows
            .iter()
            .filter(|r| r.result.p_adjusted < cfg.stats.alpha)
            .map(|r| r.dimension.label())
            .collect();
        rep.summary.push(format!(
            "Mann-Whitney on {} dimensions; significant after Holm at alpha {}: {}",
            cmp.rows.len(),
            cfg.stats.alpha,
            if significant.is_empty() {
                "none".to_string()
            } else {
                significant.join(", ")
            }
        ));
        stats_outputs(&cmp, cfg.stats.alpha, &mut rep)?;
        summary["stats"] = json!({ "alpha": cfg.stats.alpha, "significant": significant });
    }
    rep.outputs.add_json("summary.json", &summary);
    Ok(rep)
}

fn normality(features: &tracemine::miner::FeatureMatrix, rep: &mut Report) -> CliResult<()> {
    let rows: Vec<Vec<String>> = (0..features.n_cols())
        .map(|j| {
            let col: Vec<f64> = (0..features.n_rows()).map(|i| f64::from(features.get(i, j))).collect();
            let (w, p) = match normality_check(&col) {
                Ok(r) => (r.statistic.to_string(), r.p.to_string()),
                Err(_) => (String::new(), String::new()),
            };
            vec![features.columns[j].joined(), w, p]
        })
        .collect();
    rep.outputs
        .add("normality.csv", common::csv_bytes(&["pattern", "w", "p"], &rows)?);
    Ok(())
}

fn stats_outputs(cmp: &ClusterComparison, alpha: f64, rep: &mut Report) -> CliResult<()> {
    let sd = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    let full: Vec<Vec<String>> = cmp
        .rows
        .iter()
        .map(|row| {
            let r = &row.result;
            vec![
                row.dimension.key().to_string(),
                r.group_a.mean.to_string(),
                r.group_b.mean.to_string(),
                sd(r.group_a.sd),
                sd(r.group_b.sd),
                r.group_a.median.to_string(),
                r.group_b.median.to_string(),
                r.u.to_string(),
                r.z.to_string(),
                r.p_two_sided.to_string(),
                r.p_adjusted.to_string(),
                r.r_effect.to_string(),
                r.n1.to_string(),
                r.n2.to_string(),
                r.p_exact.map(|p| p.to_string()).unwrap_or_default(),
                (r.p_adjusted < alpha).to_string(),
            ]
        })
        .collect();
    let header = [
        "dimension",
        "mean_c1",
        "mean_c2",
        "sd_c1",
        "sd_c2",
        "median_c1",
        "median_c2",
        "u",
        "z",
        "p",
        "p_adjust_holm",
        "r",
        "n_c1",
        "n_c2",
        "p_exact",
        "significant",
    ];
    rep.outputs.add("stats.csv", common::csv_bytes(&header, &full)?);
    rep.outputs.add_json("stats.json", cmp);

    let rows: Vec<Vec<String>> = cmp
        .rows
        .iter()
        .map(|row| {
            let r = &row.result;
            vec![
                row.dimension.label().to_string(),
                dec2(r.group_a.mean),
                dec2(r.group_b.mean),
                render::opt_dec2(r.group_a.sd),
                render::opt_dec2(r.group_b.sd),
                dec2(r.group_a.median),
                dec2(r.group_b.median),
                dec2(r.u),
                dec2(r.z),
                dec2(r.p_two_sided),
                dec2(r.p_adjusted),
                dec2(r.r_effect),
            ]
        })
        .collect();
    let md_header = [
        "Essay Score Dimensions",
        "Mean_C1",
        "Mean_C2",
        "SD_C1",
        "SD_C2",
        "Median_C1",
        "Median_C2",
        "U",
        "Z",
        "p",
        "p_adjust (Holm)",
        "r",
    ];
    let (n1, n2) = cmp.rows.first().map(|r| (r.result.n1, r.result.n2)).unwrap_or_default();
    let md = format!(
        "{}\nN: cluster 1 = {n1}, cluster 2 = {n2}\n",
        render::table(&md_header, &rows)
    );
    rep.outputs.add_text("stats.md", md);
    Ok(())
}
