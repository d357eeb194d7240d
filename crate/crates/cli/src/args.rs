use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use direp_core::QuadratureConfig;

#[derive(Debug, Parser)]
#[command(name = "direp", version, about = "Exceedance probabilities of the Dirichlet distribution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exceedance probabilities for one alpha vector or a file of them
    Ep(EpArgs),
    /// Agglomerate categories into groups and compute group EPs
    Agglom(AgglomArgs),
    /// Posterior alpha and EPs from poll percentages
    Poll(PollArgs),
    /// Random-effects Bayesian model selection from log model evidences
    Bms(BmsArgs),
    /// Time integration against sampling on a synthetic batch
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Integration,
    Sampling,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,

    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
}

impl CommonArgs {
    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig::with_tolerances(self.abs_tol, self.rel_tol)
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["alpha", "input"])))]
pub struct EpArgs {
    /// Comma-separated concentration parameters
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,

    /// File with one comma-separated alpha vector per line
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "auto")]
    pub method: Method,

    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,

    /// Required for --method sampling
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct AgglomArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,

    /// Groups of 1-based indices, e.g. "1,3;2,4;5,6"
    #[arg(long)]
    pub groups: String,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct PollArgs {
    /// Comma-separated percentages, one per category
    #[arg(long, allow_hyphen_values = true)]
    pub percent: String,

    /// Number of respondents
    #[arg(long)]
    pub n: f64,

    /// Comma-separated prior alpha (default all ones)
    #[arg(long, allow_hyphen_values = true)]
    pub prior: Option<String>,

    /// Round the posterior alpha to integers
    #[arg(long)]
    pub round: bool,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct BmsArgs {
    /// CSV of log model evidences; "---" lines separate matrices
    #[arg(long)]
    pub lme: PathBuf,

    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,

    /// Model families in the groups syntax, e.g. "1,3;2,4"
    #[arg(long)]
    pub families: Option<String>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Categories per alpha vector (at least 3)
    #[arg(long)]
    pub k: usize,

    /// Number of alpha vectors
    #[arg(long)]
    pub batch: usize,

    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}
