//! `isosym`: brackets, classification, exact expansions, admissible weights,
//! theorem checks and fixtures from the command line.
//!
//! Exit codes: 0 on success or pass, 1 on a negative answer (not a member,
//! no weight found, a failed check), 2 on usage or I/O errors.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isosym_core::bracket::BracketKind;

/// Seed used when neither `--seed` nor `ISOSYM_SEED` is given.
const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "isosym", version, about = "Weighted isosymmetric operators: brackets, classes and theorem checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Weight and operator files.
#[derive(Debug, Args)]
struct Pair {
    /// Weight `A`: matrix JSON, or an object with an `"A"` entry.
    #[arg(long = "A", value_name = "FILE")]
    a: PathBuf,
    /// Operator `T`: matrix JSON, or an object with a `"T"` entry.
    #[arg(long = "T", value_name = "FILE")]
    t: PathBuf,
}

/// Orders of a bracket.
#[derive(Debug, Args)]
struct Orders {
    /// Isometric order.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Symmetric order.
    #[arg(long, default_value_t = 1)]
    n: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one bracket and print its residual and scale.
    Bracket {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum)]
        kind: BracketArg,
        #[command(flatten)]
        orders: Orders,
        /// Write the bracket matrix here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide membership in one class.
    Check {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum)]
        kind: ClassArg,
        #[command(flatten)]
        orders: Orders,
        /// Relative tolerance.
        #[arg(long, default_value_t = isosym_core::classify::DEFAULT_RHO)]
        rho: f64,
    },
    /// Membership grid over all orders up to `(M, N)` and its minimal pairs.
    Profile {
        #[command(flatten)]
        pair: Pair,
        #[arg(long = "M", default_value_t = 6)]
        max_m: u32,
        #[arg(long = "N", default_value_t = 6)]
        max_n: u32,
        /// Use the skew brackets.
        #[arg(long)]
        skew: bool,
        #[arg(long, default_value_t = isosym_core::classify::DEFAULT_RHO)]
        rho: f64,
        /// Write the full profile as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exact integer coefficient table of a bracket symbol.
    Expand {
        #[arg(long, value_enum)]
        kind: BracketArg,
        #[command(flatten)]
        orders: Orders,
        /// Expand at `T + S` for a doubly commuting pair instead.
        #[arg(long)]
        pair: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a PSD weight making `T` a member at `(m, n)`.
    FindA {
        #[arg(long = "T", value_name = "FILE")]
        t: PathBuf,
        #[command(flatten)]
        orders: Orders,
        #[arg(long, default_value_t = 200)]
        attempts: usize,
        #[arg(long, env = "ISOSYM_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the weight as matrix JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run numerical theorem checks.
    Verify(VerifyArgs),
    /// List or export the named fixtures.
    Gallery {
        /// Fixture to export.
        #[arg(long, conflicts_with_all = ["list", "all"])]
        name: Option<String>,
        /// Print fixture names and descriptions.
        #[arg(long)]
        list: bool,
        /// Export every fixture.
        #[arg(long, conflicts_with = "list")]
        all: bool,
        /// Directory for exported fixtures.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Eigenvalues, their distance to the unit circle and the real line, and
    /// `A`-inner products of eigenvectors.
    Spectrum {
        #[command(flatten)]
        pair: Pair,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Check to run.
    #[arg(long, value_name = "NAME", required_unless_present = "all", conflicts_with = "all")]
    theorem: Option<String>,
    /// Run every check.
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = isosym_core::lab::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, env = "ISOSYM_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Tolerance for every check; each check has its own default.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the reports as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Directory for instances of failed trials.
    #[arg(long, default_value = "isosym-failures")]
    dump_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BracketArg {
    Isometry,
    Symmetry,
    SkewSymmetry,
    Omega,
    Lambda,
}

impl BracketArg {
    fn kind(self, o: &Orders) -> BracketKind {
        match self {
            BracketArg::Isometry => BracketKind::Isometry(o.m),
            BracketArg::Symmetry => BracketKind::Symmetry(o.n),
            BracketArg::SkewSymmetry => BracketKind::SkewSymmetry(o.n),
            BracketArg::Omega => BracketKind::Omega(o.m, o.n),
            BracketArg::Lambda => BracketKind::Lambda(o.m, o.n),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Isometry,
    Symmetry,
    SkewSymmetry,
    #[value(alias = "omega")]
    Isosym,
    #[value(alias = "lambda")]
    SkewIsosym,
}

impl ClassArg {
    fn kind(self, o: &Orders) -> BracketKind {
        match self {
            ClassArg::Isometry => BracketKind::Isometry(o.m),
            ClassArg::Symmetry => BracketKind::Symmetry(o.n),
            ClassArg::SkewSymmetry => BracketKind::SkewSymmetry(o.n),
            ClassArg::Isosym => BracketKind::Omega(o.m, o.n),
            ClassArg::SkewIsosym => BracketKind::Lambda(o.m, o.n),
        }
    }
}

/// Whether a command answered positively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Positive,
    Negative,
}

fn run(cli: Cli) -> Result<Outcome, commands::CliError> {
    match cli.command {
        Command::Bracket { pair, kind, orders, out } => commands::bracket(&pair.a, &pair.t, kind.kind(&orders), out),
        Command::Check { pair, kind, orders, rho } => commands::check(&pair.a, &pair.t, kind.kind(&orders), rho),
        Command::Profile { pair, max_m, max_n, skew, rho, json } => {
            commands::profile(&pair.a, &pair.t, max_m, max_n, skew, rho, json)
        }
        Command::Expand { kind, orders, pair, out } => commands::expand(kind.kind(&orders), pair, out),
        Command::FindA { t, orders, attempts, seed, out } => commands::find_a(&t, orders.m, orders.n, attempts, seed, out),
        Command::Verify(v) => commands::verify(v.theorem.as_deref(), v.trials, v.seed, v.tol, v.json, &v.dump_dir),
        Command::Gallery { name, list, all, out } => commands::gallery(name.as_deref(), list, all, &out),
        Command::Spectrum { pair } => commands::spectrum(&pair.a, &pair.t),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
