//! The pipeline configuration file (TOML). Relative paths resolve against the
//! directory holding the config file; command-line flags override any key.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tracemine::corpus::{Dimension, IntraEventOrder};
use tracemine::synth::{BehaviorProfile, DEFAULT_LENGTH_RANGE};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    pub mining: Mining,
    pub flatten: Flatten,
    pub clustering: Clustering,
    pub stats: Stats,
    pub irr: Irr,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synth: Option<Synth>,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub logs: Option<PathBuf>,
    pub scores: Option<PathBuf>,
    /// Defaults to the bundled twelve-code codebook.
    pub codebook: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Mining {
    pub minsup_pct: f64,
    pub minsup_grid: Vec<f64>,
    pub max_len: Option<usize>,
    pub max_gap: Option<usize>,
}

impl Default for Mining {
    fn default() -> Self {
        Mining {
            minsup_pct: 50.0,
            minsup_grid: vec![50.0, 55.0, 60.0, 65.0, 70.0],
            max_len: None,
            max_gap: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Flatten {
    pub order: IntraEventOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Clustering {
    pub k_range: [usize; 2],
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    pub standardize: bool,
    /// Skips the elbow search for the interaction clusters.
    pub k_override: Option<usize>,
    /// Same, for the score-space clusters.
    pub score_k: Option<usize>,
}

impl Default for Clustering {
    fn default() -> Self {
        Clustering {
            k_range: [1, 8],
            seed: 42,
            restarts: tracemine::cluster::DEFAULT_RESTARTS,
            max_iter: tracemine::cluster::DEFAULT_MAX_ITER,
            standardize: false,
            k_override: None,
            score_k: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Stats {
    pub alpha: f64,
    pub dims: Vec<Dimension>,
}

impl Default for Stats {
    fn default() -> Self {
        Stats {
            alpha: 0.05,
            dims: Dimension::STRUCTURAL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CategorySet {
    /// Every code in the codebook counts toward chance agreement.
    #[default]
    Codebook,
    /// Only codes either rater used.
    Observed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Irr {
    pub labels_a: Option<PathBuf>,
    pub labels_b: Option<PathBuf>,
    pub rater_scores: Option<PathBuf>,
    pub categories: CategorySet,
    pub tie_correct: bool,
}

impl Default for Irr {
    fn default() -> Self {
        Irr {
            labels_a: None,
            labels_b: None,
            rater_scores: None,
            categories: CategorySet::Codebook,
            tie_correct: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Synth {
    /// Falls back to `clustering.seed`.
    #[serde(default)]
    pub seed: Option<u64>,
    pub profiles: Vec<ProfileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileEntry {
    pub name: String,
    pub count: usize,
    pub initial: BTreeMap<String, f64>,
    pub transitions: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default = "default_length_range")]
    pub length_range: [usize; 2],
    #[serde(default)]
    pub score_range: Option<[u8; 2]>,
}

fn default_length_range() -> [usize; 2] {
    DEFAULT_LENGTH_RANGE
}

impl ProfileEntry {
    pub fn profile(&self) -> BehaviorProfile {
        BehaviorProfile {
            name: self.name.clone(),
            initial: self.initial.clone(),
            transitions: self.transitions.clone(),
            length_range: self.length_range,
            score_range: self.score_range,
        }
    }
}

fn check_pct(what: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v <= 100.0 {
        Ok(())
    } else {
        Err(CliError::config(format!("{what} = {v} is outside (0, 100]")))
    }
}

impl PipelineConfig {
    pub fn parse(text: &str, base_dir: &Path) -> CliResult<Self> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<(Self, Vec<u8>)> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| CliError::config(format!("{} is not UTF-8", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
        Ok((Self::parse(&text, &base)?, bytes))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        check_pct("mining.minsup_pct", self.mining.minsup_pct)?;
        if self.mining.minsup_grid.is_empty() {
            return Err(CliError::config("mining.minsup_grid is empty"));
        }
        for &v in &self.mining.minsup_grid {
            check_pct("mining.minsup_grid value", v)?;
        }
        let [lo, hi] = self.clustering.k_range;
        if lo < 1 || lo > hi {
            return Err(CliError::config(format!("clustering.k_range [{lo}, {hi}] is invalid")));
        }
        for (key, k) in [
            ("k_override", self.clustering.k_override),
            ("score_k", self.clustering.score_k),
        ] {
            if k == Some(0) {
                return Err(CliError::config(format!("clustering.{key} must be at least 1")));
            }
        }
        if self.clustering.restarts == 0 || self.clustering.max_iter == 0 {
            return Err(CliError::config("clustering.restarts and max_iter must be positive"));
        }
        if !(self.stats.alpha > 0.0 && self.stats.alpha < 1.0) {
            return Err(CliError::config(format!(
                "stats.alpha = {} is outside (0, 1)",
                self.stats.alpha
            )));
        }
        if self.stats.dims.is_empty() {
            return Err(CliError::config("stats.dims is empty"));
        }
        if let Some(s) = &self.synth {
            for p in &s.profiles {
                if p.count == 0 {
                    return Err(CliError::config(format!("synth profile '{}' has count 0", p.name)));
                }
                p.profile().validate().map_err(|e| CliError::config(e.to_string()))?;
            }
        }
        Ok(())
    }

    pub fn synth_seed(&self) -> u64 {
        self.synth.as_ref().and_then(|s| s.seed).unwrap_or(self.clustering.seed)
    }
}
