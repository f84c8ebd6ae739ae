use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{Codebook, SCORE_MAX, SCORE_MIN};
use crate::error::{Error, Result};

pub const DEFAULT_LENGTH_RANGE: [usize; 2] = [5, 57];
pub const MAX_LENGTH: usize = 10_000;
const TOLERANCE: f64 = 1e-9;

fn default_length_range() -> [usize; 2] {
    DEFAULT_LENGTH_RANGE
}

/// A first-order Markov chain over action codes.
///
/// `initial` and each row of `transitions` are sparse distributions; codes
/// left out have probability zero. `score_range`, when set, draws every
/// essay dimension uniformly from the inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorProfile {
    pub name: String,
    pub initial: BTreeMap<String, f64>,
    pub transitions: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default = "default_length_range")]
    pub length_range: [usize; 2],
    #[serde(default)]
    pub score_range: Option<[u8; 2]>,
}

impl BehaviorProfile {
    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Profile {
            profile: self.name.clone(),
            message: message.into(),
        }
    }

    fn check_distribution(&self, what: &str, dist: &BTreeMap<String, f64>) -> Result<()> {
        if let Some((code, p)) = dist.iter().find(|(_, p)| !p.is_finite() || **p < 0.0) {
            return Err(self.fail(format!(
                "{what}: probability {p} for '{code}' is not a finite non-negative number"
            )));
        }
        let sum: f64 = dist.values().sum();
        if (sum - 1.0).abs() > TOLERANCE {
            return Err(self.fail(format!("{what} sums to {sum}, expected 1")));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(self.fail("name is empty"));
        }
        let [lo, hi] = self.length_range;
        if lo < 1 || hi > MAX_LENGTH || lo > hi {
            return Err(self.fail(format!(
                "length range [{lo}, {hi}] is outside [1, {MAX_LENGTH}] or reversed"
            )));
        }
        if let Some([a, b]) = self.score_range {
            if a < SCORE_MIN || b > SCORE_MAX || a > b {
                return Err(self.fail(format!(
                    "score range [{a}, {b}] is outside [{SCORE_MIN}, {SCORE_MAX}] or reversed"
                )));
            }
        }
        self.check_distribution("initial distribution", &self.initial)?;
        for (from, row) in &self.transitions {
            self.check_distribution(&format!("transition row '{from}'"), row)?;
        }
        // every state the chain can enter needs an outgoing row
        let reachable = self
            .initial
            .iter()
            .chain(self.transitions.values().flatten())
            .filter(|(_, p)| **p > 0.0)
            .map(|(c, _)| c);
        for code in reachable {
            if !self.transitions.contains_key(code) {
                return Err(self.fail(format!("code '{code}' is reachable but has no transition row")));
            }
        }
        Ok(())
    }

    /// Every code the profile mentions.
    pub fn codes(&self) -> BTreeSet<&str> {
        self.initial
            .keys()
            .chain(self.transitions.keys())
            .chain(self.transitions.values().flat_map(BTreeMap::keys))
            .map(String::as_str)
            .collect()
    }

    pub fn check_codes(&self, codebook: &Codebook) -> Result<()> {
        match self.codes().into_iter().find(|c| !codebook.contains(c)) {
            Some(c) => Err(self.fail(format!("unknown code '{c}'"))),
            None => Ok(()),
        }
    }

    pub(crate) fn compile(&self) -> Result<Chain> {
        self.validate()?;
        let states: Vec<String> = self.codes().into_iter().map(str::to_string).collect();
        let index = |c: &str| states.binary_search_by(|s| s.as_str().cmp(c)).expect("state listed");
        let table = |dist: &BTreeMap<String, f64>| {
            let mut weights = vec![0.0; states.len()];
            for (c, p) in dist {
                weights[index(c)] = *p;
            }
            thresholds(&weights)
        };
        let rows = states
            .iter()
            .map(|s| self.transitions.get(s).map(&table).unwrap_or_default())
            .collect();
        Ok(Chain {
            initial: table(&self.initial),
            rows,
            states,
        })
    }
}

/// Cumulative 64-bit fixed-point thresholds, with the last positive entry
/// pinned to 2^64 so every draw lands somewhere.
fn thresholds(weights: &[f64]) -> Vec<u128> {
    const SCALE: f64 = 18_446_744_073_709_551_616.0;
    let total: f64 = weights.iter().sum();
    let mut cum = 0.0;
    let mut out: Vec<u128> = weights
        .iter()
        .map(|w| {
            cum += w / total;
            (cum * SCALE).round() as u128
        })
        .collect();
    if let Some(last) = weights.iter().rposition(|w| *w > 0.0) {
        for t in &mut out[last..] {
            *t = 1u128 << 64;
        }
    }
    out
}

pub(crate) struct Chain {
    pub states: Vec<String>,
    initial: Vec<u128>,
    rows: Vec<Vec<u128>>,
}

impl Chain {
    fn pick(table: &[u128], draw: u64) -> usize {
        let d = u128::from(draw);
        table.iter().position(|&t| d < t).expect("thresholds end at 2^64")
    }

    pub fn first(&self, draw: u64) -> usize {
        Self::pick(&self.initial, draw)
    }

    pub fn next(&self, state: usize, draw: u64) -> usize {
        Self::pick(&self.rows[state], draw)
    }
}
