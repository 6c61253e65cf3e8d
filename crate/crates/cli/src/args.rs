use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsum::optimize::GridAxis;
use qsum::{AnsatzKind, IdfMode, MixerTopology};

#[derive(Debug, Clone, Parser)]
#[command(name = "qsum", version, about = "Extractive summarization as constrained quantum optimization, simulated")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build a problem file from an article.
    Ingest(IngestArgs),
    /// Optimize parameters noiselessly, then sample and report.
    Solve(SolveArgs),
    /// p=1 QAOA grid with its Pareto frontier.
    Pareto(ParetoArgs),
    /// ROUGE of a solve report's in-constraint distribution.
    Rouge(RougeArgs),
    /// ROUGE of the exact optimum across redundancy weights.
    SweepLambda(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TextArgs {
    /// Sentence embeddings, one comma-separated vector per line.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Idf numerator: distinct words or sentence count.
    #[arg(long = "idf-n", default_value = "words")]
    pub idf_mode: IdfMode,
    /// Summary length in sentences.
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    pub article: PathBuf,
    #[command(flatten)]
    pub text: TextArgs,
    #[arg(long, default_value_t = qsum::DEFAULT_LAMBDA)]
    pub lambda: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseChoice {
    None,
    H1,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveChoice {
    Penalized,
    Raw,
    /// Approximation ratio, with `--icp-threshold` as the ICP floor.
    ApproxRatio,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Gamma axis as start:end:count [default: 0:π:50].
    #[arg(long)]
    pub grid_gamma: Option<GridAxis>,
    /// Beta axis as start:end:count [default: 0:π:50].
    #[arg(long)]
    pub grid_beta: Option<GridAxis>,
    /// Sample each grid point this many times instead of evaluating exactly.
    #[arg(long)]
    pub grid_shots: Option<u64>,
    #[arg(long, default_value_t = qsum::optimize::DEFAULT_ICP_THRESHOLD)]
    pub icp_threshold: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub problem: PathBuf,
    /// qaoa, xy-qaoa or lvqe.
    #[arg(long)]
    pub algorithm: AnsatzKind,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 2000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "none")]
    pub noise: NoiseChoice,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub pspam: Option<f64>,
    /// path or ring.
    #[arg(long, default_value = "path")]
    pub mixer_topology: MixerTopology,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Multistart target [default: raw for xy-qaoa, penalized otherwise].
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveChoice>,
    /// Multistart starts [default: 20 for lvqe below 20 qubits, 5 above, 10 otherwise].
    #[arg(long)]
    pub starts: Option<usize>,
    /// Objective evaluations per start.
    #[arg(long, default_value_t = 500)]
    pub budget: usize,
    /// Skip the search and use these parameters (JSON, or a previous report).
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Report the exact output distribution instead of sampling.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the evaluated circuit as one gate per line.
    #[arg(long)]
    pub dump_circuit: Option<PathBuf>,
    /// With --reference, adds distribution-weighted ROUGE to the report.
    #[arg(long, requires = "reference")]
    pub article: Option<PathBuf>,
    #[arg(long, requires = "article")]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ParetoArgs {
    pub problem: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Seed for sampled grids.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write every grid point as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RougeArgs {
    pub report: PathBuf,
    pub article: PathBuf,
    pub reference: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    pub article: PathBuf,
    pub reference: PathBuf,
    #[command(flatten)]
    pub text: TextArgs,
    /// Lambda values as start:end:count.
    #[arg(long, default_value = "0:0.25:26")]
    pub lambda_grid: GridAxis,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
