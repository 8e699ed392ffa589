//! `hermkin` — command-line drivers for the Hermite-spectral kinetic toolkit.
//!
//! Subcommands: `advect` and `vp` run config-driven simulations into an
//! output directory (diagnostics CSV, run manifest, conservation summary,
//! optional coefficient snapshots); `stability-calc` and `lb-table` are
//! stateless calculators printing to stdout; `project-ic` projects a velocity
//! profile onto Hermite coefficients for later use as an initial condition.
//!
//! Exit codes: 0 success, 2 config error (unreadable/malformed config or
//! arguments), 3 validation error (semantically invalid parameters, bad
//! input files, or output-directory preconditions), 4 solver or runtime
//! failure. All validation runs before any output file is created.

mod commands;
mod config;
mod outdir;
mod snapshot;
mod tables;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Error categories carrying the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: the config file or command line could not be parsed.
    Config(String),
    /// Exit 3: parameters or input files are semantically invalid, or the
    /// output directory refuses the run.
    Validation(String),
    /// Exit 4: the solver failed mid-run or an output could not be written.
    Solver(String),
}

impl CliError {
    fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Validation(_) => "validation",
            CliError::Solver(_) => "solver",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Validation(m) | CliError::Solver(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Solver(_) => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "hermkin",
    version,
    about = "Hermite-spectral kinetic solvers: damped advection and Vlasov-Poisson"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Common arguments of the file-producing subcommands.
#[derive(Args)]
pub struct RunArgs {
    /// Flat key=value config file (see README for the schemas).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; created if absent, refused if non-empty.
    #[arg(long)]
    pub out: PathBuf,
    /// Allow writing into a non-empty output directory.
    #[arg(long)]
    pub force: bool,
    /// Seed for randomized initial data (recorded in the manifest).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override a config key, e.g. --set nu=0.5 (repeatable; wins over the file).
    #[arg(long = "set")]
    pub set: Vec<String>,
    /// Fixed reduction order for bit-reproducible reruns (the solvers are
    /// sequential, so this is always in effect; the flag is recorded).
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Args)]
pub struct StabilityArgs {
    /// Field-amplitude estimate 𝓜 (max over space of 2|E|).
    #[arg(long = "M")]
    pub m_field: f64,
    /// Collision strength ν.
    #[arg(long)]
    pub nu: f64,
    /// Highest Hermite degree N.
    #[arg(long = "N")]
    pub n_max: usize,
}

#[derive(Args)]
pub struct LbTableArgs {
    /// Weighting family: aw or sw.
    #[arg(long)]
    pub basis: String,
    /// Half-order k of the collision operator (dissipation order 2k).
    #[arg(long)]
    pub k: usize,
    /// Highest Hermite degree N.
    #[arg(long = "N")]
    pub n_max: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run a damped-advection problem from a config file.
    Advect(RunArgs),
    /// Run a Vlasov-Poisson problem from a config file.
    Vp(RunArgs),
    /// Print implicit-step bounds and the suggested collision strength.
    StabilityCalc(StabilityArgs),
    /// Print the collision-operator eigenvalue table.
    LbTable(LbTableArgs),
    /// Project a velocity profile onto Hermite coefficients.
    ProjectIc(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Advect(args) => commands::advect::run(&args),
        Command::Vp(args) => commands::vp::run(&args),
        Command::StabilityCalc(args) => commands::stability::run(&args),
        Command::LbTable(args) => commands::lb_table::run(&args),
        Command::ProjectIc(args) => commands::project_ic::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error ({}): {}", e.category(), e.message());
            ExitCode::from(e.code())
        }
    }
}
