mod common;
mod irr;
mod mine;
mod plot;
mod rq1;
mod rq2;
mod synth;

use std::path::{Path, PathBuf};

use crate::config::PipelineConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::{sha256_hex, Manifest, Outputs};
use crate::{Categories, Cli, Command, DataArgs, IrrArgs};

/// What a finished command reports back.
#[derive(Debug)]
pub struct Outcome {
    pub dir: PathBuf,
    /// Conditions worth attention; any of these makes the exit status 3.
    pub warnings: Vec<String>,
    /// Informational messages that leave the exit status alone.
    pub notices: Vec<String>,
    pub summary: Vec<String>,
}

/// Files, warnings and summary lines produced by one command.
#[derive(Debug, Default)]
pub(crate) struct Report {
    pub outputs: Outputs,
    pub warnings: Vec<String>,
    pub notices: Vec<String>,
    pub summary: Vec<String>,
}

fn absolute(p: &Path) -> CliResult<PathBuf> {
    std::path::absolute(p).map_err(|e| CliError::io(p, e))
}

fn apply_data_args(cfg: &mut PipelineConfig, a: &DataArgs) -> CliResult<()> {
    if let Some(p) = &a.logs {
        cfg.paths.logs = Some(absolute(p)?);
    }
    if let Some(p) = &a.scores {
        cfg.paths.scores = Some(absolute(p)?);
    }
    if let Some(p) = &a.codebook {
        cfg.paths.codebook = Some(absolute(p)?);
    }
    if let Some(v) = a.minsup {
        cfg.mining.minsup_pct = v;
    }
    if a.max_len.is_some() {
        cfg.mining.max_len = a.max_len;
    }
    if a.max_gap.is_some() {
        cfg.mining.max_gap = a.max_gap;
    }
    if a.k_override.is_some() {
        cfg.clustering.k_override = a.k_override;
    }
    if let Some(g) = &a.grid {
        cfg.mining.minsup_grid = g.clone();
    }
    Ok(())
}

fn apply_irr_args(cfg: &mut PipelineConfig, a: &IrrArgs) -> CliResult<()> {
    if let Some(p) = &a.labels_a {
        cfg.irr.labels_a = Some(absolute(p)?);
    }
    if let Some(p) = &a.labels_b {
        cfg.irr.labels_b = Some(absolute(p)?);
    }
    if let Some(p) = &a.rater_scores {
        cfg.irr.rater_scores = Some(absolute(p)?);
    }
    if let Some(p) = &a.codebook {
        cfg.paths.codebook = Some(absolute(p)?);
    }
    match a.categories {
        Some(Categories::Codebook) => cfg.irr.categories = crate::config::CategorySet::Codebook,
        Some(Categories::Observed) => cfg.irr.categories = crate::config::CategorySet::Observed,
        None => {}
    }
    Ok(())
}

/// Loads the config, applies flag overrides and runs one command.
pub fn run(cli: Cli) -> CliResult<Outcome> {
    let (mut cfg, config_bytes) = match &cli.config {
        Some(path) => {
            let (cfg, bytes) = PipelineConfig::load(path)?;
            (cfg, Some(bytes))
        }
        None => (PipelineConfig::default(), None),
    };
    if let Some(seed) = cli.seed {
        cfg.clustering.seed = seed;
        if let Some(s) = cfg.synth.as_mut() {
            s.seed = Some(seed);
        }
    }
    match &cli.command {
        Command::Mine(a) | Command::Rq1(a) | Command::Rq2(a) | Command::Plots(a) => apply_data_args(&mut cfg, a)?,
        Command::Irr(a) => apply_irr_args(&mut cfg, a)?,
        Command::Simulate | Command::Bench => {}
    }
    cfg.validate()?;

    let out_root = match (&cli.out, &cfg.paths.out) {
        (Some(p), _) => absolute(p)?,
        (None, Some(p)) => cfg.resolve(p),
        (None, None) => absolute(Path::new("tracemine-out"))?,
    };
    let name = cli.command.name();
    let report = match &cli.command {
        Command::Mine(_) => mine::run(&cfg)?,
        Command::Rq1(_) => rq1::run(&cfg)?,
        Command::Rq2(_) => rq2::run(&cfg)?,
        Command::Irr(_) => irr::run(&cfg)?,
        Command::Simulate => synth::simulate(&cfg)?,
        Command::Bench => synth::bench(&cfg)?,
        Command::Plots(_) => plot::run(&cfg)?,
    };

    // the output location does not change what was computed
    let mut hashed = cfg.clone();
    hashed.paths.out = None;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: name.to_string(),
        seed: match name {
            "simulate" | "bench" => cfg.synth_seed(),
            _ => cfg.clustering.seed,
        },
        config_sha256: sha256_hex(&serde_json::to_vec(&hashed).expect("serializable config")),
        config_file_sha256: config_bytes.as_deref().map(sha256_hex),
        inputs: Default::default(),
        outputs: Default::default(),
        warnings: report.warnings.clone(),
    };
    let dir = report.outputs.write(&out_root.join(name), manifest)?;
    Ok(Outcome {
        dir,
        warnings: report.warnings,
        notices: report.notices,
        summary: report.summary,
    })
}
