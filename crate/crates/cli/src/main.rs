//! `trotter`: first-order Trotter error of electronic Hamiltonians from FCIDUMP files.
//!
//! Exit codes: 0 success, 1 numerical or convergence failure, 2 input error.

mod commands;
mod correlate;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trotter_core::metrics::{Method, DEFAULT_ACF_STEPS};
use trotter_core::ordering::OrderingSpec;
use trotter_core::terms::Representation;
use trotter_core::Error;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionOverflow { limit, .. } => CliError::Input(format!(
                "{e}; choose an active space of at most {} spatial orbitals",
                limit / 2
            )),
            Error::Parse { .. }
            | Error::Io(_)
            | Error::Config(_)
            | Error::NonPositiveTime(_)
            | Error::InvalidPermutation(_)
            | Error::Nyquist(_)
            | Error::DimensionMismatch { .. } => CliError::Input(e.to_string()),
            Error::NotHermitian { .. }
            | Error::NotUnitary { .. }
            | Error::BranchCut { .. }
            | Error::ZeroEnergy
            | Error::DegenerateWindow(_)
            | Error::Bracket { .. }
            | Error::Convergence { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "trotter",
    version,
    about = "First-order Trotter error of electronic Hamiltonians"
)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// Term construction shared by the single-run commands.
#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    /// fermionic or qubit.
    #[arg(long = "rep", default_value = "fermionic")]
    pub representation: Representation,
    /// magnitude, index, random:<seed> or explicit:<1-based list>.
    #[arg(long = "order", default_value = "magnitude")]
    pub ordering: OrderingSpec,
    /// Time step; defaults to 0.95 pi (normalized) or 0.95 pi / |E0| with E0
    /// the electronic ground energy.
    #[arg(long)]
    pub t: Option<f64>,
    /// Map the spectrum onto [-1, 0].
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub normalize: bool,
    #[arg(long, default_value_t = trotter_core::fermion::DEFAULT_PRUNE)]
    pub prune: f64,
    /// Comma-separated Givens angles in lexicographic pair order.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub basis: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sizes, one-norms, exact ground energy and the recommended time step.
    Inspect {
        /// FCIDUMP file, or `-` for standard input.
        system: String,
        #[arg(long, default_value_t = trotter_core::fermion::DEFAULT_PRUNE)]
        prune: f64,
    },
    /// Ground-state energy shift of one Trotter step.
    Error {
        /// FCIDUMP file, or `-` for standard input.
        system: String,
        #[command(flatten)]
        build: BuildArgs,
        /// heff or acf.
        #[arg(long, default_value = "heff")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_ACF_STEPS)]
        acf_steps: usize,
        /// Write the report here, with a manifest alongside.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Error estimates and bounds for one system, basis and ordering, or
    /// with `--correlate`, R^2 between the columns of saved panels.
    Estimates {
        /// FCIDUMP file, or `-` for standard input.
        #[arg(required_unless_present = "correlate")]
        system: Option<String>,
        #[command(flatten)]
        build: BuildArgs,
        /// Directory of estimate panels (JSON) to correlate.
        #[arg(long, conflicts_with = "system")]
        correlate: Option<PathBuf>,
        /// Restrict the correlation to these columns.
        #[arg(long, value_delimiter = ',', requires = "correlate")]
        columns: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-basis propagators over a grid of rotation angles.
    Sweep(ConfigArgs),
    /// Trotter-error distribution over random bases or orderings.
    Sample(ConfigArgs),
    /// Ensemble of eta-constituent random propagators.
    RandomProps(ConfigArgs),
    /// Rotation angle at which the single-basis Trotter error vanishes.
    Bisect(ConfigArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Experiment config (JSON).
    pub config: PathBuf,
    /// Output directory; overrides the config's `output`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    match cli.command {
        Command::Inspect { system, prune } => commands::inspect(&system, prune),
        Command::Error {
            system,
            build,
            method,
            acf_steps,
            out,
        } => commands::error(&system, &build, method, acf_steps, out.as_deref()),
        Command::Estimates {
            system,
            build,
            correlate,
            columns,
            out,
        } => match (system, correlate) {
            (_, Some(dir)) => commands::correlate(&dir, columns.as_deref(), out.as_deref()),
            (Some(system), None) => commands::estimates(&system, &build, out.as_deref()),
            (None, None) => unreachable!("clap requires a system or --correlate"),
        },
        Command::Sweep(args) => commands::experiment("sweep", &args),
        Command::Sample(args) => commands::experiment("sample", &args),
        Command::RandomProps(args) => commands::experiment("random-props", &args),
        Command::Bisect(args) => commands::experiment("bisect", &args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
