use serde_json::json;
use tracemine::corpus::{write_event_log, write_scores, Codebook};
use tracemine::synth::{generate, recovery_benchmark, BehaviorProfile, SynthCohort};

use super::{common, Report};
use crate::config::PipelineConfig;
use crate::error::{CliError, CliResult};
use crate::render::{self, dec2};

fn cohort(cfg: &PipelineConfig, codebook: &Codebook) -> CliResult<SynthCohort> {
    let synth = cfg.synth.as_ref().ok_or_else(|| {
        CliError::config("the [synth] section with at least one [[synth.profiles]] entry is required")
    })?;
    if synth.profiles.is_empty() {
        return Err(CliError::config("synth.profiles is empty"));
    }
    let profiles: Vec<(BehaviorProfile, usize)> = synth.profiles.iter().map(|p| (p.profile(), p.count)).collect();
    for (p, _) in &profiles {
        p.check_codes(codebook).map_err(|e| CliError::config(e.to_string()))?;
    }
    Ok(generate(&profiles, cfg.synth_seed())?)
}

pub fn simulate(cfg: &PipelineConfig) -> CliResult<Report> {
    let mut rep = Report::default();
    let codebook = common::codebook(cfg, &mut rep.outputs)?;
    let c = cohort(cfg, &codebook)?;
    let mut events = Vec::new();
    write_event_log(&c.sessions, &mut events)?;
    rep.outputs.add("events.jsonl", events);
    let mut truth = Vec::new();
    c.write_ground_truth(&mut truth)?;
    rep.outputs.add("ground_truth.csv", truth);
    if !c.scores.is_empty() {
        let mut scores = Vec::new();
        write_scores(&c.scores, &mut scores)?;
        rep.outputs.add("scores.csv", scores);
    }
    rep.summary.push(format!(
        "simulated {} students from {} profiles (seed {})",
        c.sessions.len(),
        c.profile_names().len(),
        c.seed
    ));
    Ok(rep)
}

pub fn bench(cfg: &PipelineConfig) -> CliResult<Report> {
    let mut rep = Report::default();
    let codebook = common::codebook(cfg, &mut rep.outputs)?;
    let c = cohort(cfg, &codebook)?;
    let [lo, hi] = cfg.clustering.k_range;
    let r = recovery_benchmark(&c, cfg.mining.minsup_pct, lo..=hi, cfg.clustering.seed)?;
    if r.small_sample {
        rep.warnings
            .push("some profile has fewer than 3 students; the recovery score is unstable".into());
    }
    if let Some(curve) = &r.elbow {
        if curve.low_confidence {
            rep.warnings.push(format!(
                "the elbow is weak; k = {} is a low-confidence choice",
                curve.selected_k
            ));
        }
        common::elbow_outputs(curve, "elbow", &mut rep.outputs)?;
    }
    let n_profiles = c.profile_names().len();
    rep.outputs.add_json(
        "bench.json",
        &json!({
            "ari": r.ari,
            "selected_k": r.selected_k,
            "k_source": if r.elbow.is_some() { "elbow" } else { "profiles" },
            "profiles": n_profiles,
            "students": c.sessions.len(),
            "patterns": r.patterns.len(),
            "minsup_pct": cfg.mining.minsup_pct,
            "seed": c.seed,
            "clustering_seed": cfg.clustering.seed,
            "cluster_sizes": r.assignment.cluster_sizes(),
            "small_sample": r.small_sample,
        }),
    );
    let rows = vec![
        vec!["Adjusted Rand index".into(), format!("{:.4}", r.ari)],
        vec!["Selected k".into(), r.selected_k.to_string()],
        vec!["Profiles".into(), n_profiles.to_string()],
        vec!["Students".into(), c.sessions.len().to_string()],
        vec!["Frequent patterns".into(), r.patterns.len().to_string()],
    ];
    rep.outputs
        .add_text("bench.md", render::table(&["Measure", "Value"], &rows));
    rep.summary.push(format!("ARI: {:.4}", r.ari));
    rep.summary
        .push(format!("selected k: {} ({} profiles)", r.selected_k, n_profiles));
    rep.summary.push(format!(
        "patterns: {}, elbow WCSS(1): {}",
        r.patterns.len(),
        r.elbow.as_ref().map_or("-".into(), |e| dec2(e.points[0].1))
    ));
    Ok(rep)
}
