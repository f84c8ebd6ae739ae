//! Command-line pipeline: mining, clustering, group comparisons, agreement
//! and synthetic-cohort benchmarks, with CSV/Markdown/SVG reports and a
//! hashed run manifest.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod plots;
pub mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, Outcome};
pub use config::PipelineConfig;
pub use error::{CliError, CliResult, EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_WARNINGS};

#[derive(Debug, Parser)]
#[command(
    name = "tracemine",
    version,
    about = "Sequential pattern mining and cluster statistics for coded chat logs"
)]
pub struct Cli {
    /// Pipeline config file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for clustering and synthetic cohorts.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output root; each command writes into its own subdirectory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress the summary on stdout.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frequent patterns and per-student feature counts.
    Mine(DataArgs),
    /// Interaction clusters and score comparisons between them.
    Rq1(DataArgs),
    /// Score clusters and the patterns unique to each.
    Rq2(DataArgs),
    /// Inter-rater agreement (AC1 on labels, Kendall's W on scores).
    Irr(IrrArgs),
    /// Generate a synthetic cohort from the configured profiles.
    Simulate,
    /// Generate a cohort and measure how well clustering recovers it.
    Bench,
    /// SVG charts of the elbow curve, pattern supports and score spreads.
    Plots(DataArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mine(_) => "mine",
            Command::Rq1(_) => "rq1",
            Command::Rq2(_) => "rq2",
            Command::Irr(_) => "irr",
            Command::Simulate => "simulate",
            Command::Bench => "bench",
            Command::Plots(_) => "plots",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct DataArgs {
    /// Coded event log (JSON Lines).
    #[arg(long)]
    pub logs: Option<PathBuf>,
    /// Essay scores CSV.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Codebook CSV; the bundled codebook when absent.
    #[arg(long)]
    pub codebook: Option<PathBuf>,
    /// Minimum support in percent.
    #[arg(long)]
    pub minsup: Option<f64>,
    /// Longest pattern to report.
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Most positions allowed between consecutive pattern elements.
    #[arg(long)]
    pub max_gap: Option<usize>,
    /// Fixed number of interaction clusters.
    #[arg(long)]
    pub k_override: Option<usize>,
    /// Minsup values for the unique-pattern scan, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Categories {
    Codebook,
    Observed,
}

#[derive(Debug, Clone, Default, Args)]
pub struct IrrArgs {
    /// CSV with `item_id,code` from the first rater.
    #[arg(long)]
    pub labels_a: Option<PathBuf>,
    /// CSV with `item_id,code` from the second rater, same item order.
    #[arg(long)]
    pub labels_b: Option<PathBuf>,
    /// CSV with `item_id` followed by one score column per rater.
    #[arg(long)]
    pub rater_scores: Option<PathBuf>,
    /// Category set for chance agreement.
    #[arg(long, value_enum)]
    pub categories: Option<Categories>,
    /// Codebook CSV; the bundled codebook when absent.
    #[arg(long)]
    pub codebook: Option<PathBuf>,
}
