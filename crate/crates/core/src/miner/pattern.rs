use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered list of single codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pattern(Vec<String>);

impl Pattern {
    pub fn new<I, S>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(Error::invalid("pattern must have at least one element"));
        }
        if elements.iter().any(|e| e.is_empty()) {
            return Err(Error::invalid("pattern elements must be non-empty"));
        }
        Ok(Pattern(elements))
    }

    pub fn elements(&self) -> &[String] {
        &self.0
    }

    /// Comma-joined form used in CSV cells, e.g. `hec,hec`.
    pub fn joined(&self) -> String {
        self.0.join(",")
    }
}

impl Deref for Pattern {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

/// Renders comma-and-space separated: `hec, hec`.
impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(", "))
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pattern::new(s.split(',').map(|e| e.trim().to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequentPattern {
    pub pattern: Pattern,
    pub support: usize,
}

/// Reporting order: support descending, then shorter first, then lexicographic.
pub fn report_order(a: &FrequentPattern, b: &FrequentPattern) -> Ordering {
    b.support
        .cmp(&a.support)
        .then(a.pattern.len().cmp(&b.pattern.len()))
        .then_with(|| a.pattern.cmp(&b.pattern))
}

/// Result of one mining run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequentPatternSet {
    pub patterns: Vec<FrequentPattern>,
    pub min_count: usize,
    /// Relative threshold the absolute `min_count` was derived from, if any.
    pub minsup_pct: Option<f64>,
    pub n_sequences: usize,
}

impl FrequentPatternSet {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn support_of(&self, pattern: &Pattern) -> Option<usize> {
        self.patterns
            .iter()
            .find(|fp| &fp.pattern == pattern)
            .map(|fp| fp.support)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FrequentPattern> {
        self.patterns.iter()
    }

    /// Writes `pattern;support` rows with a header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "pattern;support")?;
        for fp in &self.patterns {
            writeln!(w, "{};{}", fp.pattern.joined(), fp.support)?;
        }
        w.flush()?;
        Ok(())
    }

    /// One JSON object per line: `{"pattern":[..],"support":n}`.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for fp in &self.patterns {
            serde_json::to_writer(&mut w, fp).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads back the `pattern;support` table written by
/// [`FrequentPatternSet::write_csv`].
pub fn read_pattern_csv<R: BufRead>(reader: R) -> Result<Vec<FrequentPattern>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if i == 0 || line.is_empty() {
            continue;
        }
        let (pat, sup) = line
            .rsplit_once(';')
            .ok_or_else(|| Error::parse(i + 1, "expected 'pattern;support'"))?;
        let support = sup
            .trim()
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("bad support '{sup}'")))?;
        let pattern = pat.parse().map_err(|e: Error| Error::parse(i + 1, e.to_string()))?;
        out.push(FrequentPattern { pattern, support });
    }
    Ok(out)
}
