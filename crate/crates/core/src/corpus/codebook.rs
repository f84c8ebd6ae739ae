use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/codebook.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Deductive,
    Inductive,
}

/// Writing phase a code belongs to. `Support` codes may occur in any phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Planning,
    Drafting,
    Reviewing,
    Support,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDef {
    pub id: String,
    pub origin: Origin,
    pub phase: Phase,
    pub description: String,
}

/// An ordered set of action codes. Declaration order is significant: it is
/// the order used by [`IntraEventOrder::Codebook`](super::IntraEventOrder).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    codes: Vec<CodeDef>,
    index: HashMap<String, usize>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

impl Codebook {
    pub fn new(codes: Vec<CodeDef>) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::Codebook("no codes declared".into()));
        }
        let mut index = HashMap::with_capacity(codes.len());
        for (i, def) in codes.iter().enumerate() {
            if !valid_id(&def.id) {
                return Err(Error::Codebook(format!(
                    "code id '{}' must be non-empty lowercase alphanumeric",
                    def.id
                )));
            }
            if index.insert(def.id.clone(), i).is_some() {
                return Err(Error::Codebook(format!("duplicate code id '{}'", def.id)));
            }
        }
        Ok(Codebook { codes, index })
    }

    /// The twelve-code student codebook shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_csv(BUNDLED.as_bytes()).expect("bundled codebook is valid")
    }

    /// Reads a codebook from CSV with header `id,origin,phase,description`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut codes = Vec::new();
        for (i, row) in rdr.deserialize::<CodeDef>().enumerate() {
            // header is line 1
            let def = row.map_err(|e| Error::parse(i + 2, e.to_string()))?;
            codes.push(def);
        }
        Self::new(codes)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        for def in &self.codes {
            wtr.serialize(def)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn codes(&self) -> &[CodeDef] {
        &self.codes
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.codes.iter().map(|c| c.id.as_str())
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Declaration position of `id`.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Option<&CodeDef> {
        self.position(id).map(|i| &self.codes[i])
    }
}

impl Default for Codebook {
    fn default() -> Self {
        Self::bundled()
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::Planning => "planning",
            Phase::Drafting => "drafting",
            Phase::Reviewing => "reviewing",
            Phase::Support => "support",
        };
        f.write_str(s)
    }
}

impl FromStr for Codebook {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_csv(s.as_bytes())
    }
}
