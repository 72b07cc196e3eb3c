//! Command-line front end over `ypc-core`.
//!
//! Every command writes CSV tables (with JSON mirrors) plus a run manifest
//! holding the parameters, seeds and file digests needed to repeat the run.

mod commands;
mod files;
pub mod manifest;
mod reproduce;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ypc_core::baselines::Measure;
use ypc_core::epidemics::{Model, Modulation, SisScoring};
use ypc_core::ranking::Orientation;

pub use files::InputError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ypc", version, about = "Yukawa potential centrality and spreading benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank nodes by YPC score
    Ypc(YpcArgs),
    /// Score nodes with a baseline centrality measure
    Centrality(CentralityArgs),
    /// Monte Carlo SI/SIS spreading from every node
    Spread(SpreadArgs),
    /// Kendall's tau and plot data for two score files
    Compare(CompareArgs),
    /// Generate a synthetic graph
    Generate(GenerateArgs),
    /// Run a full experiment pipeline into a directory
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct GraphInput {
    /// Edge-list file
    #[arg(long, short)]
    pub graph: PathBuf,
    /// Optional node-list file adding isolated nodes
    #[arg(long)]
    pub nodes: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct YpcArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Stop once a ring's potential magnitude falls below this
    #[arg(long, default_value_t = ypc_core::ypc::DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Hop cap (default: number of nodes)
    #[arg(long)]
    pub max_radius: Option<usize>,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CentralityArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// DC, BC, CC, EVC, EcC, FC, PRC, KSHELL or GC
    #[arg(long, short)]
    pub measure: Measure,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
    #[arg(long, default_value_t = 3)]
    pub gravity_cutoff: usize,
    #[arg(long, default_value_t = 2.0)]
    pub gravity_exponent: f64,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SpreadArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// SI or SIS
    #[arg(long, default_value = "SIS")]
    pub model: Model,
    #[arg(long)]
    pub beta_coeff: f64,
    /// Recovery coefficient (SIS only)
    #[arg(long)]
    pub gamma_coeff: Option<f64>,
    /// plain or degree (default: degree for SIS, plain for SI)
    #[arg(long)]
    pub modulation: Option<Modulation>,
    /// events or prevalence (SIS only)
    #[arg(long, default_value = "events")]
    pub scoring: SisScoring,
    #[arg(long, default_value_t = ypc_core::epidemics::EpidemicConfig::DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, default_value_t = ypc_core::epidemics::EpidemicConfig::DEFAULT_RUNS)]
    pub runs: usize,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Also write every per-run score
    #[arg(long)]
    pub keep_runs: bool,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TauArg {
    A,
    B,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// First score file (CSV with a node_id column)
    pub a: PathBuf,
    /// Second score file
    pub b: PathBuf,
    /// Score column in the first file (default: ypc_score or score)
    #[arg(long)]
    pub column_a: Option<String>,
    #[arg(long)]
    pub column_b: Option<String>,
    /// Overrides the orientation detected from the first file
    #[arg(long)]
    pub orientation_a: Option<Orientation>,
    #[arg(long)]
    pub orientation_b: Option<Orientation>,
    #[arg(long, value_enum, default_value_t = TauArg::A)]
    pub variant: TauArg,
    /// Keep every k-th comparison row; tau always uses all nodes
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, short)]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphModel {
    Ba,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = GraphModel::Ba)]
    pub model: GraphModel,
    #[arg(long, short)]
    pub n: usize,
    #[arg(long, short)]
    pub m: usize,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Ba,
    Lesmis,
    Facebook,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Directory holding lesmis.txt and facebook_combined.txt
    #[arg(long, env = "YPC_DATA_DIR", default_value = "data")]
    pub data_dir: PathBuf,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    #[arg(long, default_value_t = ypc_core::epidemics::EpidemicConfig::DEFAULT_RUNS)]
    pub runs: usize,
    #[arg(long, default_value_t = ypc_core::epidemics::EpidemicConfig::DEFAULT_STEPS)]
    pub steps: usize,
    /// Skip the baseline centrality comparisons
    #[arg(long)]
    pub no_baselines: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

/// Error carrying the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    /// Input and parameter problems exit with 2, everything else with 1.
    pub fn classify(error: anyhow::Error) -> Failure {
        let usage = error.chain().any(|cause| {
            cause.is::<InputError>()
                || cause.is::<clap::Error>()
                || matches!(
                    cause.downcast_ref::<ypc_core::Error>(),
                    Some(
                        ypc_core::Error::Parse { .. }
                            | ypc_core::Error::EmptyInput
                            | ypc_core::Error::UnknownNode(_)
                            | ypc_core::Error::InvalidParameter { .. }
                            | ypc_core::Error::EmptyGraph
                            | ypc_core::Error::MismatchedNodes { .. }
                            | ypc_core::Error::TooFewObservations { .. }
                    )
                )
        });
        Failure {
            code: if usage { EXIT_USAGE } else { EXIT_COMPUTE },
            error,
        }
    }
}

/// Executes a parsed command. `argv` is recorded in the manifest for replay.
pub fn run(cli: Cli, argv: Vec<String>) -> Result<(), Failure> {
    let result = match cli.command {
        Command::Ypc(a) => commands::ypc(&a, argv),
        Command::Centrality(a) => commands::centrality(&a, argv),
        Command::Spread(a) => commands::spread(&a, argv),
        Command::Compare(a) => commands::compare(&a, argv),
        Command::Generate(a) => commands::generate(&a, argv),
        Command::Reproduce(a) => reproduce::run(&a, argv),
    };
    result.map_err(Failure::classify)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let argv = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli, argv) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            f.code
        }
    }
}
