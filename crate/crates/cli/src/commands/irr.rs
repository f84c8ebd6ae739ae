use std::path::Path;

use serde_json::json;
use tracemine::agreement::{gwet_ac1, kendalls_w, scores_to_ranks, AgreementResult};

use super::{common, Report};
use crate::config::{CategorySet, PipelineConfig};
use crate::error::{CliError, CliResult};
use crate::render::{self, dec2};

fn records(path: &Path, bytes: &[u8]) -> CliResult<(Vec<String>, Vec<Vec<String>>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, r) in rdr.records().enumerate() {
        let r = r.map_err(|e| CliError::Invalid(format!("{}: {e} at line {}", path.display(), i + 2)))?;
        rows.push(r.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

/// Reads an `item_id,code` file.
fn labels(path: &Path, bytes: &[u8]) -> CliResult<Vec<(String, String)>> {
    let (header, rows) = records(path, bytes)?;
    if header != ["item_id", "code"] {
        return Err(CliError::Invalid(format!(
            "{}: expected header item_id,code",
            path.display()
        )));
    }
    Ok(rows.into_iter().map(|r| (r[0].clone(), r[1].clone())).collect())
}

/// Checks that both raters labelled the same items in the same order.
pub fn align(a: &[(String, String)], b: &[(String, String)]) -> CliResult<()> {
    if let Some(i) = a.iter().zip(b).position(|(x, y)| x.0 != y.0) {
        return Err(CliError::Invalid(format!(
            "label files diverge at row {}: item '{}' vs '{}'",
            i + 1,
            a[i].0,
            b[i].0
        )));
    }
    if a.len() != b.len() {
        return Err(CliError::Invalid(format!(
            "label files differ in length ({} vs {} items); first unmatched row {}",
            a.len(),
            b.len(),
            a.len().min(b.len()) + 1
        )));
    }
    Ok(())
}

fn rater_columns(path: &Path, bytes: &[u8]) -> CliResult<(Vec<String>, Vec<Vec<f64>>)> {
    let (header, rows) = records(path, bytes)?;
    if header.len() < 3 || header[0] != "item_id" {
        return Err(CliError::Invalid(format!(
            "{}: expected header item_id followed by at least two rater columns",
            path.display()
        )));
    }
    let mut cols = vec![Vec::with_capacity(rows.len()); header.len() - 1];
    for (i, r) in rows.iter().enumerate() {
        for (j, raw) in r.iter().enumerate().skip(1) {
            let v: f64 = raw.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                CliError::Invalid(format!(
                    "{}: non-numeric score '{raw}' at line {}",
                    path.display(),
                    i + 2
                ))
            })?;
            cols[j - 1].push(v);
        }
    }
    Ok((header[1..].to_vec(), cols))
}

pub fn run(cfg: &PipelineConfig) -> CliResult<Report> {
    let mut rep = Report::default();
    let irr = &cfg.irr;
    let mut results: Vec<(&str, AgreementResult)> = Vec::new();
    match (&irr.labels_a, &irr.labels_b) {
        (Some(a), Some(b)) => {
            let (pa, pb) = (cfg.resolve(a), cfg.resolve(b));
            let (ba, bb) = (common::read(&pa)?, common::read(&pb)?);
            rep.outputs.input("labels_a", &pa, &ba);
            rep.outputs.input("labels_b", &pb, &bb);
            let (la, lb) = (labels(&pa, &ba)?, labels(&pb, &bb)?);
            align(&la, &lb)?;
            let codes_a: Vec<&str> = la.iter().map(|x| x.1.as_str()).collect();
            let codes_b: Vec<&str> = lb.iter().map(|x| x.1.as_str()).collect();
            let r = match irr.categories {
                CategorySet::Codebook => {
                    let codebook = common::codebook(cfg, &mut rep.outputs)?;
                    let ids: Vec<&str> = codebook.ids().collect();
                    gwet_ac1(&codes_a, &codes_b, Some(&ids))?
                }
                CategorySet::Observed => gwet_ac1(&codes_a, &codes_b, None)?,
            };
            results.push(("ac1", r));
        }
        (None, None) => {}
        _ => return Err(CliError::config("irr.labels_a and irr.labels_b must be given together")),
    }
    if let Some(p) = &irr.rater_scores {
        let path = cfg.resolve(p);
        let bytes = common::read(&path)?;
        rep.outputs.input("rater_scores", &path, &bytes);
        let (_, cols) = rater_columns(&path, &bytes)?;
        let ranks = scores_to_ranks(&cols)?;
        results.push(("kendall_w", kendalls_w(&ranks, irr.tie_correct)?));
    }
    if results.is_empty() {
        return Err(CliError::config("irr needs labels_a and labels_b, or rater_scores"));
    }

    let mut rows = Vec::new();
    let mut json_out = serde_json::Map::new();
    for (key, r) in &results {
        let (name, detail) = match *key {
            "ac1" => (
                "Gwet's AC1",
                format!("{} items, {} categories", r.n_items, r.n_categories.unwrap_or(0)),
            ),
            _ => (
                "Kendall's W",
                format!(
                    "{} raters, {} items, tie correction {}",
                    r.n_raters,
                    r.n_items,
                    if r.tie_corrected == Some(true) { "on" } else { "off" }
                ),
            ),
        };
        rep.summary.push(format!("{name} = {}", dec2(r.statistic)));
        rows.push(vec![name.to_string(), dec2(r.statistic), detail]);
        json_out.insert(key.to_string(), json!(r));
    }
    rep.outputs.add_json("irr.json", &json_out);
    rep.outputs
        .add_text("irr.md", render::table(&["Coefficient", "Value", "Basis"], &rows));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn alignment_diagnostics() {
        let a = l(&[("1", "p"), ("2", "w"), ("3", "hec")]);
        assert!(align(&a, &a).is_ok());
        let swapped = l(&[("1", "p"), ("3", "w"), ("2", "hec")]);
        assert!(align(&a, &swapped).unwrap_err().to_string().contains("row 2"));
        let short = l(&[("1", "p"), ("2", "w")]);
        assert!(align(&a, &short).unwrap_err().to_string().contains("3 vs 2"));
    }

    #[test]
    fn rater_file_parsing() {
        let (names, cols) = rater_columns(Path::new("r.csv"), b"item_id,r1,r2\na,1,2\nb,3,4\n").unwrap();
        assert_eq!(names, ["r1", "r2"]);
        assert_eq!(cols, [vec![1.0, 3.0], vec![2.0, 4.0]]);
        assert!(rater_columns(Path::new("r.csv"), b"item_id,r1,r2\na,1,x\n").is_err());
        assert!(rater_columns(Path::new("r.csv"), b"item_id,r1\na,1\n").is_err());
    }
}
