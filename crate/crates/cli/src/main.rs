mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Expected shortfall estimation and Monte Carlo experiments.
#[derive(Debug, Parser)]
#[command(name = "esr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate ES from a file with one number per line.
    Estimate(EstimateArgs),
    /// Lipschitz constants and asymptotic standard deviations of the reference distributions.
    Table1 {
        /// Comma-separated risk levels.
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.05, 0.01])]
        alphas: Vec<f64>,
        /// Directory for table1.csv; prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deviation probability against sample size, one CSV per estimator.
    Curve(RunArgs),
    /// Histograms of the estimates at one sample size.
    Hist(RunArgs),
    /// Histograms with and without corruption.
    CorruptDemo(RunArgs),
    /// Deviation curves plus a long-run variance estimate for dependent data.
    Mixing(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core, 1 = sequential).
    #[arg(long, env = "ES_WORKERS")]
    workers: Option<usize>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Plugin,
    Truncated,
    MedianOfBlocks,
    Trimmed,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Data file, one real number per line; blank lines are skipped.
    data: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Kind::Truncated)]
    estimator: Kind,
    /// Block size.
    #[arg(long, default_value_t = es_core::estim::DEFAULT_BLOCK_SIZE)]
    m: usize,
    #[arg(long, default_value_t = es_core::estim::DEFAULT_BETA1)]
    beta1: f64,
    #[arg(long, default_value_t = es_core::estim::DEFAULT_BETA2)]
    beta2: f64,
    /// Observations skipped before each block.
    #[arg(long, default_value_t = 0)]
    gap: usize,
    #[arg(long, default_value_t = es_core::estim::DEFAULT_TRIM_C)]
    trim_c: f64,
    #[arg(long, default_value_t = es_core::estim::DEFAULT_TRIM_EXP)]
    trim_exp: f64,
    /// Digits after the decimal point.
    #[arg(long, default_value_t = 6)]
    digits: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => commands::estimate(&args),
        Command::Table1 { alphas, out } => commands::table1(&alphas, out.as_deref()),
        Command::Curve(args) => commands::curve(&args),
        Command::Hist(args) => commands::hist(&args),
        Command::CorruptDemo(args) => commands::corrupt_demo(&args),
        Command::Mixing(args) => commands::mixing(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
