use std::collections::HashMap;

use serde::Serialize;

use super::{holm_adjust, mann_whitney_u, TestResult};
use crate::corpus::{Dimension, EssayScores};
use crate::error::{Error, Result};

/// Groups smaller than this get a small-sample warning.
pub const SMALL_GROUP: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionTest {
    pub dimension: Dimension,
    pub result: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterComparison {
    pub rows: Vec<DimensionTest>,
    pub warnings: Vec<String>,
}

/// One Mann-Whitney test per dimension between clusters 0 and 1, with Holm
/// adjustment across the family.
///
/// `labels` maps student ids to cluster ids. Labelled students without scores
/// are left out with a warning; scored students without a label are an error.
pub fn compare_clusters(
    scores: &[EssayScores],
    labels: &HashMap<String, usize>,
    dims: &[Dimension],
) -> Result<ClusterComparison> {
    if dims.is_empty() {
        return Err(Error::invalid("no dimensions to compare"));
    }
    let mut cluster_ids: Vec<usize> = labels.values().copied().collect();
    cluster_ids.sort_unstable();
    cluster_ids.dedup();
    if cluster_ids != [0, 1] {
        return Err(Error::invalid(format!(
            "cluster comparison needs exactly two clusters (0 and 1), found {}",
            cluster_ids.len()
        )));
    }

    let mut warnings = Vec::new();
    if let Some(s) = scores.iter().find(|s| !labels.contains_key(&s.student_id)) {
        return Err(Error::invalid(format!(
            "scored student '{}' has no cluster label",
            s.student_id
        )));
    }
    let scored: HashMap<&str, &EssayScores> = scores.iter().map(|s| (s.student_id.as_str(), s)).collect();
    let mut missing: Vec<&str> = labels
        .keys()
        .map(String::as_str)
        .filter(|id| !scored.contains_key(id))
        .collect();
    if !missing.is_empty() {
        missing.sort_unstable();
        warnings.push(format!("no scores for clustered students: {}", missing.join(", ")));
    }

    let mut rows = Vec::with_capacity(dims.len());
    for &dim in dims {
        let mut groups: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for s in scores {
            let v = s
                .get(dim)
                .ok_or_else(|| Error::invalid(format!("dimension {dim} missing for student '{}'", s.student_id)))?;
            groups[labels[&s.student_id]].push(f64::from(v));
        }
        let result = mann_whitney_u(&groups[0], &groups[1])?;
        if result.degenerate {
            warnings.push(format!("{dim}: all scores identical, test is uninformative"));
        }
        rows.push(DimensionTest { dimension: dim, result });
    }
    let (n1, n2) = (rows[0].result.n1, rows[0].result.n2);
    if n1.min(n2) < SMALL_GROUP {
        warnings.push(format!("small sample: cluster sizes {n1} and {n2}"));
    }

    let raw: Vec<f64> = rows.iter().map(|r| r.result.p_two_sided).collect();
    for (row, adj) in rows.iter_mut().zip(holm_adjust(&raw)?) {
        row.result.p_adjusted = adj;
    }
    Ok(ClusterComparison { rows, warnings })
}
