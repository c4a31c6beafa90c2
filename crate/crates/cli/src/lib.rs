//! Command-line driver: instance files in, JSON reports out.
//!
//! Exit codes: 0 on success, 1 when a mathematical check fails (for example
//! a nonzero obstruction class), 2 on malformed or inconsistent input.

pub mod commands;
pub mod format;

use std::path::PathBuf;

use ainfty::ainfty::Convention;
use clap::{Parser, Subcommand};

pub use commands::{execute, Outcome};

#[derive(Debug)]
pub enum CliError {
    /// Malformed or structurally invalid input (exit 2).
    Input(String),
    /// A mathematical precondition fails (exit 1).
    Math(ainfty::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Math(e) => write!(f, "{e}"),
        }
    }
}

impl From<ainfty::Error> for CliError {
    fn from(e: ainfty::Error) -> Self {
        use ainfty::Error as E;
        match e {
            E::RingMismatch(..)
            | E::NotPrime(_)
            | E::ParseScalar(_)
            | E::DimensionMismatch(_)
            | E::ArityOutOfRange { .. }
            | E::ModuleMismatch
            | E::DegreeViolation(_)
            | E::InvalidArStructure(_)
            | E::RTooSmall(_)
            | E::WrongConvention(_)
            | E::SourceNotASuspension => CliError::Input(e.to_string()),
            other => CliError::Math(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ConventionArg {
    Circle,
    Suspended,
    Stasheff,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Circle => Convention::Circle,
            ConventionArg::Suspended => Convention::Suspended,
            ConventionArg::Stasheff => Convention::Stasheff,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ainfty", version, about = "Exact A-infinity obstruction computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,

    /// Add wall-clock timing to the report (makes reports run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check d^2 = 0, degrees and the A_r relations.
    Validate { input: String },
    /// Homology ranks, torsion and the assumption (A) verdict.
    Homology { input: String },
    /// Randomized checks of the pre-Lie identities on End of the module.
    CheckPrelie {
        input: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the relations up to arity R (defaults to the instance's r).
    CheckAr {
        input: String,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Hochschild cohomology HH^N_I of the homology algebra.
    Hochschild {
        input: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: i64,
    },
    /// Obstruction class for lifting at level R (defaults to the instance's r).
    Obstruct {
        input: String,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Extend to an A_N-structure, writing the new instance to --out.
    Extend {
        input: String,
        #[arg(long)]
        to: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
    /// Rewrite the instance in another sign convention.
    Convert {
        input: String,
        #[arg(long, value_enum)]
        from: ConventionArg,
        #[arg(long, value_enum)]
        to: ConventionArg,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
    },
}

impl Command {
    pub fn input(&self) -> &str {
        match self {
            Command::Validate { input }
            | Command::Homology { input }
            | Command::CheckPrelie { input, .. }
            | Command::CheckAr { input, .. }
            | Command::Hochschild { input, .. }
            | Command::Obstruct { input, .. }
            | Command::Extend { input, .. }
            | Command::Convert { input, .. } => input,
        }
    }

    pub fn out(&self) -> Option<&str> {
        match self {
            Command::Extend { out, .. } | Command::Convert { out, .. } => out.as_deref(),
            _ => None,
        }
    }
}
