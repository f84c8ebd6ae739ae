use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{Codebook, StudentSession};
use crate::error::{Error, Result};

/// How the codes of a multi-code event are ordered once expanded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntraEventOrder {
    /// Keep the order given in the log record.
    #[default]
    Listed,
    /// Sort by declaration order in the codebook.
    Codebook,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StudentSequence {
    pub student_id: String,
    pub codes: Vec<String>,
}

/// Flat code sequences, one per student. The unit of input for mining.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SequenceDatabase {
    sequences: Vec<StudentSequence>,
    alphabet: BTreeSet<String>,
}

impl SequenceDatabase {
    pub fn new(sequences: Vec<StudentSequence>) -> Result<Self> {
        let mut ids = HashSet::with_capacity(sequences.len());
        let mut alphabet = BTreeSet::new();
        for s in &sequences {
            if !ids.insert(s.student_id.as_str()) {
                return Err(Error::invalid(format!(
                    "duplicate student '{}' in sequence database",
                    s.student_id
                )));
            }
            alphabet.extend(s.codes.iter().cloned());
        }
        Ok(SequenceDatabase { sequences, alphabet })
    }

    /// Convenience constructor: students are named by position ("0", "1", ...).
    pub fn from_codes<I, S, C>(rows: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = C>,
        C: Into<String>,
    {
        let sequences = rows
            .into_iter()
            .enumerate()
            .map(|(i, row)| StudentSequence {
                student_id: i.to_string(),
                codes: row.into_iter().map(Into::into).collect(),
            })
            .collect();
        Self::new(sequences).expect("positional ids are unique")
    }

    pub fn sequences(&self) -> &[StudentSequence] {
        &self.sequences
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn total_elements(&self) -> usize {
        self.sequences.iter().map(|s| s.codes.len()).sum()
    }

    pub fn get(&self, student_id: &str) -> Option<&StudentSequence> {
        self.sequences.iter().find(|s| s.student_id == student_id)
    }

    /// The sub-database of the listed students, in this database's order.
    pub fn subset<'a, I>(&self, students: I) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let keep: HashSet<&str> = students.into_iter().collect();
        let sequences: Vec<StudentSequence> = self
            .sequences
            .iter()
            .filter(|s| keep.contains(s.student_id.as_str()))
            .cloned()
            .collect();
        Self::new(sequences).expect("subset of a valid database")
    }
}

/// Expands every event into consecutive single-code elements.
pub fn flatten(sessions: &[StudentSession], order: IntraEventOrder, codebook: &Codebook) -> Result<SequenceDatabase> {
    let sequences = sessions
        .iter()
        .map(|session| {
            let mut codes = Vec::with_capacity(session.code_count());
            for event in &session.events {
                let start = codes.len();
                codes.extend(event.codes.iter().cloned());
                if order == IntraEventOrder::Codebook {
                    codes[start..].sort_by_key(|c| codebook.position(c).unwrap_or(usize::MAX));
                }
            }
            StudentSequence {
                student_id: session.student_id.clone(),
                codes,
            }
        })
        .collect();
    SequenceDatabase::new(sequences)
}
