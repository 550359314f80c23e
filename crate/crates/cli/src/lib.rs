//! The `regret` command line tool.
//!
//! [`run`] parses arguments and executes one subcommand entirely in memory,
//! returning the exit code and both output streams; `main` only forwards
//! them. Exit codes: 0 ok, 1 usage, 2 validation, 3 property violation,
//! 4 inconclusive audit.

mod commands;
mod io;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use io::Fixture;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "regret",
    version,
    about = "Regret-theoretic comparison of lotteries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two lotteries by regret.
    Compare(CompareArgs),
    /// Allais menu classification and the ζ(β) threshold.
    #[command(subcommand)]
    Allais(AllaisCommand),
    /// Compare the omelet acts.
    Savage(SavageArgs),
    /// First-order stochastic dominance between two lotteries.
    Dominance(DominanceArgs),
    /// Run a seeded property audit.
    Audit(AuditArgs),
    /// Re-evaluate a stored audit violation.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CouplingArg {
    Independent,
    /// Outcome k of the first lottery occurs together with outcome k of the second.
    Diagonal,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Regret kernel, e.g. `sinh:beta=1`, `exp:a=2,b=1`, `linear:a=2`, `tanh`.
    #[arg(long = "g", visible_alias = "kernel", default_value = "sinh:beta=1")]
    pub kernel: String,
    /// Utility curve, e.g. `linear` or `log:gamma=0.01`.
    #[arg(long = "u", visible_alias = "utility", default_value = "linear")]
    pub utility: String,
    #[arg(long, value_enum, default_value_t = CouplingArg::Independent, conflicts_with = "joint")]
    pub coupling: CouplingArg,
    /// Joint distribution document; overrides --coupling.
    #[arg(long)]
    pub joint: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum AllaisCommand {
    /// Choice pattern of a sinh-kernel, log-utility agent.
    Classify(ClassifyArgs),
    /// Threshold γ below which the (I,IV) pattern appears.
    Zeta(ZetaArgs),
    /// ζ over a grid of β, as CSV.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub scale: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub shift: f64,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    /// Relative bracket width at which bisection stops.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_delimiter = ',', default_value = "1e-4,1e-2,1,1e2,1e4")]
    pub betas: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SavageArgs {
    /// Probability that the sixth egg is rotten.
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub u6: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub u5: f64,
    #[arg(long = "u-minus5", default_value_t = -5.0, allow_negative_numbers = true)]
    pub u_minus5: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub z: f64,
    #[arg(long, default_value_t = -0.1, allow_negative_numbers = true)]
    pub w: f64,
    /// Regret kernel f; `linear:a=2` is f(x) = x.
    #[arg(long, default_value = "linear:a=2")]
    pub f: String,
}

#[derive(Debug, Args)]
pub struct DominanceArgs {
    pub first: PathBuf,
    pub second: PathBuf,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// transitivity, dominance, joint-dominance, composite or continuity.
    #[arg(long)]
    pub property: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Kernel to audit; repeatable. Defaults to the property's standard set.
    #[arg(long)]
    pub kernel: Vec<String>,
    #[arg(long, default_value = "linear")]
    pub utility: String,
    /// Fixed number of outcomes per triple (transitivity only).
    #[arg(long)]
    pub outcomes: Option<usize>,
    /// Directory receiving one replayable fixture per stored violation.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub fixture: PathBuf,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub(crate) fn ok(stdout: String) -> Self {
        Self::with_code(EXIT_OK, stdout)
    }

    pub(crate) fn with_code(code: u8, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Validation(String),
}

impl From<regret_core::Error> for CliError {
    fn from(e: regret_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let result = match cli.command {
        Command::Compare(a) => commands::compare(&a),
        Command::Allais(AllaisCommand::Classify(a)) => commands::classify(&a),
        Command::Allais(AllaisCommand::Zeta(a)) => commands::zeta(&a),
        Command::Allais(AllaisCommand::Scan(a)) => commands::scan(&a),
        Command::Savage(a) => commands::savage(&a),
        Command::Dominance(a) => commands::dominance(&a),
        Command::Audit(a) => commands::audit(&a),
        Command::Replay(a) => commands::replay(&a),
    };
    result.unwrap_or_else(|e| {
        let (code, msg) = match e {
            CliError::Usage(m) => (EXIT_USAGE, m),
            CliError::Validation(m) => (EXIT_VALIDATION, m),
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    })
}
