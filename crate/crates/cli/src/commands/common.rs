use std::collections::HashSet;
use std::path::Path;

use tracemine::cluster::{elbow_select, kmeans, ClusterAssignment, ElbowCurve, ElbowOptions, KMeansOptions};
use tracemine::corpus::{
    flatten, load_scores, parse_event_log, Codebook, EssayScores, SequenceDatabase, StudentSession,
};
use tracemine::miner::{feature_matrix, prefixspan_pct, FeatureMatrix, FrequentPatternSet, MiningOptions};
use tracemine::ndarray::ArrayView2;

use super::Report;
use crate::config::PipelineConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::Outputs;
use crate::render;

pub fn read(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn codebook(cfg: &PipelineConfig, out: &mut Outputs) -> CliResult<Codebook> {
    match &cfg.paths.codebook {
        None => Ok(Codebook::bundled()),
        Some(p) => {
            let path = cfg.resolve(p);
            let bytes = read(&path)?;
            out.input("codebook", &path, &bytes);
            Codebook::from_csv(bytes.as_slice()).map_err(|e| CliError::in_file(&path, e))
        }
    }
}

fn required<'a>(value: &'a Option<std::path::PathBuf>, key: &str) -> CliResult<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| CliError::config(format!("{key} is not set")))
}

pub fn sessions(cfg: &PipelineConfig, codebook: &Codebook, out: &mut Outputs) -> CliResult<Vec<StudentSession>> {
    let path = cfg.resolve(required(&cfg.paths.logs, "paths.logs")?);
    let bytes = read(&path)?;
    out.input("logs", &path, &bytes);
    parse_event_log(bytes.as_slice(), codebook).map_err(|e| CliError::in_file(&path, e))
}

pub fn scores(cfg: &PipelineConfig, out: &mut Outputs) -> CliResult<Vec<EssayScores>> {
    let path = cfg.resolve(required(&cfg.paths.scores, "paths.scores")?);
    let bytes = read(&path)?;
    out.input("scores", &path, &bytes);
    load_scores(bytes.as_slice()).map_err(|e| CliError::in_file(&path, e))
}

/// Keeps the scores of students in `db`, warning about the rest.
pub fn scores_in(db: &SequenceDatabase, scores: Vec<EssayScores>, warnings: &mut Vec<String>) -> Vec<EssayScores> {
    let known: HashSet<&str> = db.sequences().iter().map(|s| s.student_id.as_str()).collect();
    let (kept, extra): (Vec<_>, Vec<_>) = scores.into_iter().partition(|s| known.contains(s.student_id.as_str()));
    if !extra.is_empty() {
        let ids: Vec<&str> = extra.iter().map(|s| s.student_id.as_str()).collect();
        warnings.push(format!(
            "scores for students without logs were ignored: {}",
            ids.join(", ")
        ));
    }
    kept
}

pub fn mining_opts(cfg: &PipelineConfig) -> MiningOptions {
    MiningOptions {
        max_len: cfg.mining.max_len,
        max_gap: cfg.mining.max_gap,
    }
}

pub struct Mined {
    pub db: SequenceDatabase,
    pub patterns: FrequentPatternSet,
    pub features: FeatureMatrix,
}

/// Loads the logs, mines the cohort and counts every pattern per student,
/// adding the pattern table and feature matrix to `rep`.
pub fn mine(cfg: &PipelineConfig, rep: &mut Report) -> CliResult<Mined> {
    let codebook = codebook(cfg, &mut rep.outputs)?;
    let sessions = sessions(cfg, &codebook, &mut rep.outputs)?;
    let db = flatten(&sessions, cfg.flatten.order, &codebook)?;
    let patterns = prefixspan_pct(&db, cfg.mining.minsup_pct, mining_opts(cfg))?;
    let features = feature_matrix(&db, &patterns, cfg.mining.max_gap);

    let mut csv = Vec::new();
    patterns.write_csv(&mut csv)?;
    rep.outputs.add("patterns.csv", csv);
    let rows: Vec<Vec<String>> = patterns
        .iter()
        .map(|f| vec![f.pattern.to_string(), f.support.to_string()])
        .collect();
    let md = format!(
        "Frequent patterns at {}% minsup (support >= {} of {} students)\n\n{}",
        cfg.mining.minsup_pct,
        patterns.min_count,
        db.len(),
        render::table(&["Pattern", "Support"], &rows)
    );
    rep.outputs.add_text("patterns.md", md);
    let mut fcsv = Vec::new();
    features.write_csv(&mut fcsv)?;
    rep.outputs.add("features.csv", fcsv);
    Ok(Mined { db, patterns, features })
}

/// K-means with a fixed k, or with k picked by the elbow method over the
/// configured range (capped at the number of rows).
pub fn cluster(
    cfg: &PipelineConfig,
    data: ArrayView2<f64>,
    fixed_k: Option<usize>,
    what: &str,
    warnings: &mut Vec<String>,
) -> CliResult<(Option<ElbowCurve>, ClusterAssignment)> {
    let n = data.nrows();
    let c = &cfg.clustering;
    let base = KMeansOptions {
        k: 1,
        seed: c.seed,
        restarts: c.restarts,
        max_iter: c.max_iter,
        standardize: c.standardize,
    };
    let (curve, k) = match fixed_k {
        Some(k) => (None, k),
        None => {
            let [lo, hi] = c.k_range;
            let top = hi.min(n);
            if top < hi {
                warnings.push(format!("{what}: k range capped at {top}, the number of students"));
            }
            if top < lo || top - lo < 2 {
                return Err(CliError::Invalid(format!(
                    "{what}: {n} students are too few for an elbow search over k = {lo}..={hi}; set a fixed k"
                )));
            }
            let curve = elbow_select(data, lo..=top, &ElbowOptions::from(&base))?;
            if curve.low_confidence {
                warnings.push(format!(
                    "{what}: the elbow is weak; k = {} is a low-confidence choice",
                    curve.selected_k
                ));
            }
            let k = curve.selected_k;
            (Some(curve), k)
        }
    };
    let assignment = kmeans(data, &KMeansOptions { k, ..base })?;
    Ok((curve, assignment))
}

pub fn elbow_outputs(curve: &ElbowCurve, prefix: &str, out: &mut Outputs) -> CliResult<()> {
    let mut csv = Vec::new();
    curve.write_csv(&mut csv)?;
    out.add(&format!("{prefix}.csv"), csv);
    let rows: Vec<Vec<String>> = curve
        .points
        .iter()
        .map(|&(k, w)| {
            let sd = curve.second_differences.iter().find(|s| s.0 == k).map(|s| s.1);
            let mark = if k == curve.selected_k { " (selected)" } else { "" };
            vec![format!("{k}{mark}"), render::dec2(w), render::opt_dec2(sd)]
        })
        .collect();
    out.add_text(
        &format!("{prefix}.md"),
        render::table(&["k", "WCSS", "Second difference"], &rows),
    );
    Ok(())
}

pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}
