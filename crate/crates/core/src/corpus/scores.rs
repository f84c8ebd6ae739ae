use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rubric dimension of an essay score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Content,
    Analysis,
    Organization,
    QualityOfWriting,
    WordLimit,
}

impl Dimension {
    pub const ALL: [Dimension; 5] = [
        Dimension::Content,
        Dimension::Analysis,
        Dimension::Organization,
        Dimension::QualityOfWriting,
        Dimension::WordLimit,
    ];

    /// The four dimensions tied to argumentative structure; the default
    /// comparison family.
    pub const STRUCTURAL: [Dimension; 4] = [
        Dimension::Content,
        Dimension::Analysis,
        Dimension::Organization,
        Dimension::QualityOfWriting,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Dimension::Content => "content",
            Dimension::Analysis => "analysis",
            Dimension::Organization => "organization",
            Dimension::QualityOfWriting => "quality_of_writing",
            Dimension::WordLimit => "word_limit",
        }
    }

    /// Human-readable label used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Dimension::Content => "Content",
            Dimension::Analysis => "Analysis",
            Dimension::Organization => "Organization",
            Dimension::QualityOfWriting => "Quality of Writing",
            Dimension::WordLimit => "Word Limit",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.key() == s)
            .ok_or_else(|| Error::invalid(format!("unknown score dimension '{s}'")))
    }
}

/// Rubric scores of one essay, each on the 1..=4 scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssayScores {
    pub student_id: String,
    pub content: u8,
    pub analysis: u8,
    pub organization: u8,
    pub quality_of_writing: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_limit: Option<u8>,
}

pub const SCORE_MIN: u8 = 1;
pub const SCORE_MAX: u8 = 4;

impl EssayScores {
    pub fn get(&self, dim: Dimension) -> Option<u8> {
        match dim {
            Dimension::Content => Some(self.content),
            Dimension::Analysis => Some(self.analysis),
            Dimension::Organization => Some(self.organization),
            Dimension::QualityOfWriting => Some(self.quality_of_writing),
            Dimension::WordLimit => self.word_limit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for dim in Dimension::ALL {
            if let Some(v) = self.get(dim) {
                if !(SCORE_MIN..=SCORE_MAX).contains(&v) {
                    return Err(Error::invalid(format!(
                        "{dim} = {v} for student '{}' is outside {SCORE_MIN}..={SCORE_MAX}",
                        self.student_id
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RubricWeights {
    pub content: f64,
    pub analysis: f64,
    pub organization: f64,
    pub quality_of_writing: f64,
    pub word_limit: f64,
}

impl Default for RubricWeights {
    fn default() -> Self {
        RubricWeights {
            content: 0.30,
            analysis: 0.30,
            organization: 0.15,
            quality_of_writing: 0.15,
            word_limit: 0.10,
        }
    }
}

const WEIGHT_TOLERANCE: f64 = 1e-9;

impl RubricWeights {
    pub fn new(
        content: f64,
        analysis: f64,
        organization: f64,
        quality_of_writing: f64,
        word_limit: f64,
    ) -> Result<Self> {
        let w = RubricWeights {
            content,
            analysis,
            organization,
            quality_of_writing,
            word_limit,
        };
        let all = w.as_array();
        if all.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::invalid("rubric weights must be finite and non-negative"));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::invalid(format!("rubric weights sum to {sum}, expected 1")));
        }
        Ok(w)
    }

    pub fn get(&self, dim: Dimension) -> f64 {
        match dim {
            Dimension::Content => self.content,
            Dimension::Analysis => self.analysis,
            Dimension::Organization => self.organization,
            Dimension::QualityOfWriting => self.quality_of_writing,
            Dimension::WordLimit => self.word_limit,
        }
    }

    fn as_array(&self) -> [f64; 5] {
        Dimension::ALL.map(|d| self.get(d))
    }
}

/// Weighted rubric total on the 1..=4 scale.
///
/// When `word_limit` is absent the remaining weights are rescaled to sum to 1.
pub fn weighted_total(scores: &EssayScores, weights: &RubricWeights) -> Result<f64> {
    scores.validate()?;
    let mut num = 0.0;
    let mut active = 0.0;
    for dim in Dimension::ALL {
        let w = weights.get(dim);
        match scores.get(dim) {
            Some(v) => {
                num += w * f64::from(v);
                active += w;
            }
            None if w > 0.0 && dim != Dimension::WordLimit => {
                return Err(Error::invalid(format!(
                    "dimension {dim} missing for student '{}'",
                    scores.student_id
                )));
            }
            None => {}
        }
    }
    if active <= 0.0 {
        return Err(Error::invalid("no present dimension carries positive weight"));
    }
    Ok(num / active)
}

#[derive(Deserialize)]
struct ScoreRow {
    student_id: String,
    content: String,
    analysis: String,
    organization: String,
    quality_of_writing: String,
    #[serde(default)]
    word_limit: Option<String>,
}

fn parse_score(raw: &str, dim: Dimension, line: usize) -> Result<u8> {
    let v: i64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("{dim} '{raw}' is not an integer")))?;
    if !(i64::from(SCORE_MIN)..=i64::from(SCORE_MAX)).contains(&v) {
        return Err(Error::parse(
            line,
            format!("{dim} = {v} is outside {SCORE_MIN}..={SCORE_MAX}"),
        ));
    }
    Ok(v as u8)
}

/// Reads a scores CSV with header
/// `student_id,content,analysis,organization,quality_of_writing[,word_limit]`.
pub fn load_scores<R: Read>(reader: R) -> Result<Vec<EssayScores>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<ScoreRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::parse(line, e.to_string()))?;
        if row.student_id.is_empty() {
            return Err(Error::parse(line, "empty student_id"));
        }
        if !seen.insert(row.student_id.clone()) {
            return Err(Error::parse(line, format!("duplicate student_id '{}'", row.student_id)));
        }
        let word_limit = match row.word_limit.as_deref().map(str::trim) {
            None | Some("") => None,
            Some(raw) => Some(parse_score(raw, Dimension::WordLimit, line)?),
        };
        out.push(EssayScores {
            content: parse_score(&row.content, Dimension::Content, line)?,
            analysis: parse_score(&row.analysis, Dimension::Analysis, line)?,
            organization: parse_score(&row.organization, Dimension::Organization, line)?,
            quality_of_writing: parse_score(&row.quality_of_writing, Dimension::QualityOfWriting, line)?,
            word_limit,
            student_id: row.student_id,
        });
    }
    Ok(out)
}

pub fn write_scores<W: Write>(scores: &[EssayScores], writer: W) -> Result<()> {
    let with_limit = scores.iter().any(|s| s.word_limit.is_some());
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec![
        "student_id",
        "content",
        "analysis",
        "organization",
        "quality_of_writing",
    ];
    if with_limit {
        header.push("word_limit");
    }
    wtr.write_record(&header)?;
    for s in scores {
        let mut rec = vec![
            s.student_id.clone(),
            s.content.to_string(),
            s.analysis.to_string(),
            s.organization.to_string(),
            s.quality_of_writing.to_string(),
        ];
        if with_limit {
            rec.push(s.word_limit.map(|v| v.to_string()).unwrap_or_default());
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Students present in `scores` but absent from `known`. Callers report these
/// as warnings.
pub fn unmatched_students<'a, I>(scores: &'a [EssayScores], known: I) -> Vec<&'a str>
where
    I: IntoIterator<Item = &'a str>,
{
    let known: HashSet<&str> = known.into_iter().collect();
    scores
        .iter()
        .map(|s| s.student_id.as_str())
        .filter(|id| !known.contains(id))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn essay(c: u8, a: u8, o: u8, q: u8, wl: Option<u8>) -> EssayScores {
        EssayScores {
            student_id: "s".into(),
            content: c,
            analysis: a,
            organization: o,
            quality_of_writing: q,
            word_limit: wl,
        }
    }

    #[test]
    fn totals() {
        let w = RubricWeights::default();
        assert!((weighted_total(&essay(4, 4, 4, 4, Some(4)), &w).unwrap() - 4.0).abs() < 1e-12);
        assert!((weighted_total(&essay(4, 4, 4, 4, Some(2)), &w).unwrap() - 3.8).abs() < 1e-12);
        assert!((weighted_total(&essay(3, 3, 3, 3, None), &w).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn weights_must_sum_to_one() {
        assert!(RubricWeights::new(0.3, 0.3, 0.15, 0.15, 0.1).is_ok());
        assert!(RubricWeights::new(0.3, 0.3, 0.15, 0.15, 0.2).is_err());
        assert!(RubricWeights::new(-0.1, 0.5, 0.3, 0.2, 0.1).is_err());
    }

    #[test]
    fn load_valid_and_invalid_rows() {
        let ok = load_scores("student_id,content,analysis,organization,quality_of_writing\n20,4,4,4,4\n".as_bytes())
            .unwrap();
        assert_eq!(
            ok,
            vec![EssayScores {
                student_id: "20".into(),
                ..essay(4, 4, 4, 4, None)
            }]
        );

        let bad = "student_id,content,analysis,organization,quality_of_writing\n20,4,4,5,4\n";
        match load_scores(bad.as_bytes()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("organization"));
            }
            other => panic!("{other:?}"),
        }

        let dup = "student_id,content,analysis,organization,quality_of_writing\n1,1,1,1,1\n1,2,2,2,2\n";
        assert!(load_scores(dup.as_bytes()).is_err());

        let nonint = "student_id,content,analysis,organization,quality_of_writing\n1,1.5,1,1,1\n";
        assert!(load_scores(nonint.as_bytes()).is_err());
    }

    #[test]
    fn thirty_two_rows_with_word_limit() {
        let mut text = String::from("student_id,content,analysis,organization,quality_of_writing,word_limit\n");
        for i in 0..32 {
            text.push_str(&format!(
                "{i},{},{},{},{},{}\n",
                1 + i % 4,
                1 + (i + 1) % 4,
                1 + (i + 2) % 4,
                1 + (i + 3) % 4,
                4
            ));
        }
        let rows = load_scores(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 32);
        assert!(rows.iter().all(|r| r.word_limit == Some(4)));
        let mut out = Vec::new();
        write_scores(&rows, &mut out).unwrap();
        assert_eq!(load_scores(out.as_slice()).unwrap(), rows);
    }

    #[test]
    fn unmatched_ids_are_listed() {
        let rows = vec![
            EssayScores {
                student_id: "1".into(),
                ..essay(1, 1, 1, 1, None)
            },
            EssayScores {
                student_id: "9".into(),
                ..essay(1, 1, 1, 1, None)
            },
        ];
        assert_eq!(unmatched_students(&rows, ["1", "2"]), vec!["9"]);
    }

    fn dims() -> impl Strategy<Value = (u8, u8, u8, u8, Option<u8>)> {
        (1u8..=4, 1u8..=4, 1u8..=4, 1u8..=4, proptest::option::of(1u8..=4))
    }

    proptest! {
        #[test]
        fn total_bounded_by_extreme_dimensions((c, a, o, q, wl) in dims()) {
            let s = essay(c, a, o, q, wl);
            let t = weighted_total(&s, &RubricWeights::default()).unwrap();
            let present: Vec<u8> = Dimension::ALL.iter().filter_map(|d| s.get(*d)).collect();
            let lo = f64::from(*present.iter().min().unwrap());
            let hi = f64::from(*present.iter().max().unwrap());
            prop_assert!(t >= lo - 1e-12 && t <= hi + 1e-12);
        }

        #[test]
        fn total_monotone_in_each_dimension((c, a, o, q, wl) in dims(), which in 0usize..5) {
            let base = essay(c, a, o, q, wl);
            let mut up = base.clone();
            match which {
                0 => up.content = (c + 1).min(4),
                1 => up.analysis = (a + 1).min(4),
                2 => up.organization = (o + 1).min(4),
                3 => up.quality_of_writing = (q + 1).min(4),
                _ => up.word_limit = wl.map(|v| (v + 1).min(4)),
            }
            let w = RubricWeights::default();
            prop_assert!(weighted_total(&up, &w).unwrap() >= weighted_total(&base, &w).unwrap() - 1e-12);
        }
    }
}
