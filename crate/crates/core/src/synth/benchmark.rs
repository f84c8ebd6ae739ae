use std::ops::RangeInclusive;

use super::generate::SynthCohort;
use crate::cluster::{
    adjusted_rand_index, elbow_select, kmeans, ClusterAssignment, ElbowCurve, ElbowOptions, KMeansOptions,
};
use crate::corpus::{flatten, Codebook, IntraEventOrder};
use crate::error::{Error, Result};
use crate::miner::{feature_matrix, prefixspan_pct, FeatureMatrix, FrequentPatternSet, MiningOptions};
use crate::stats::SMALL_GROUP;

#[derive(Debug, Clone)]
pub struct RecoveryReport {
    pub ari: f64,
    pub selected_k: usize,
    /// Absent when too few students remain for a three-point elbow curve;
    /// k then falls back to the number of profiles.
    pub elbow: Option<ElbowCurve>,
    pub assignment: ClusterAssignment,
    pub patterns: FrequentPatternSet,
    pub features: FeatureMatrix,
    /// Some profile has fewer than [`SMALL_GROUP`] students.
    pub small_sample: bool,
}

/// Runs mining, feature extraction, elbow selection and K-means on the cohort
/// and scores the clusters against the generating profiles.
pub fn recovery_benchmark(
    cohort: &SynthCohort,
    minsup_pct: f64,
    k_range: RangeInclusive<usize>,
    seed: u64,
) -> Result<RecoveryReport> {
    let names = cohort.profile_names();
    if names.len() < 2 {
        return Err(Error::invalid("recovery needs at least two profiles"));
    }
    let truth = cohort.truth_labels();
    let small_sample = (0..names.len()).any(|p| truth.iter().filter(|&&t| t == p).count() < SMALL_GROUP);

    let db =
        flatten(&cohort.sessions, IntraEventOrder::Listed, &Codebook::bundled()).map_err(|e| e.in_stage("flatten"))?;
    let patterns = prefixspan_pct(&db, minsup_pct, MiningOptions::default()).map_err(|e| e.in_stage("mine"))?;
    let features = feature_matrix(&db, &patterns, None);
    let data = features.to_array();

    let n = db.len();
    let (lo, hi) = (*k_range.start(), (*k_range.end()).min(n));
    let base = KMeansOptions::new(1, seed);
    let (elbow, k) = if hi >= lo && hi - lo >= 2 {
        let curve = elbow_select(data.view(), lo..=hi, &ElbowOptions::from(&base)).map_err(|e| e.in_stage("elbow"))?;
        let k = curve.selected_k;
        (Some(curve), k)
    } else {
        (None, names.len().min(n))
    };
    let assignment = kmeans(data.view(), &KMeansOptions { k, ..base }).map_err(|e| e.in_stage("kmeans"))?;
    let ari = adjusted_rand_index(&assignment.labels, &truth).map_err(|e| e.in_stage("ari"))?;

    Ok(RecoveryReport {
        ari,
        selected_k: k,
        elbow,
        assignment,
        patterns,
        features,
        small_sample,
    })
}
