//! `paraosp`: batch driver for the verification engine.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical mismatch,
//! 2 on a usage or configuration error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use output::Format;

/// Largest accepted `--levels`.
pub const LEVEL_CAP: usize = 8;
/// Largest accepted `--degree`.
pub const DEGREE_CAP: usize = 16;
/// Environment variable fixing the worker thread count.
pub const THREADS_VAR: &str = "PARAOSP_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Engine(String),
}

#[derive(Parser, Debug)]
#[command(
    name = "paraosp",
    version,
    about = "Exact checks for the para-statistics representations of osp(2m+1|2n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Number of parafermion pairs.
    #[arg(long)]
    pub m: usize,
    /// Number of paraboson pairs.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Write records here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run every sweep on the calling thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Triple and para relations in the matrix realization.
    VerifyAlgebra(commands::AlgebraArgs),
    /// Truncated characters and the alternating-sum formula.
    Char(commands::CharArgs),
    /// Recurrence sweep and parsing-variant selection.
    VerifyId2(commands::Id2Args),
    /// Signed reduced matrix elements G_k.
    GkTable(commands::GkArgs),
    /// Gram blocks per weight with rank, character and cut verdicts.
    Gram(commands::GramArgs),
    /// Squared norms and transition traces as exact fractions.
    Matelems(commands::MatelemsArgs),
    /// GZ patterns: enumerate, count, or validate from a file.
    Dims(commands::DimsArgs),
    /// Sparse triplet dump of the algebra basis.
    DumpMatrices(commands::DumpArgs),
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Mismatch,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_VAR} must be a positive integer, got {raw:?}"
        ))
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<Verdict, CliError> {
    configure_threads()?;
    match cli.command {
        Command::VerifyAlgebra(a) => commands::verify_algebra(a),
        Command::Char(a) => commands::char(a),
        Command::VerifyId2(a) => commands::verify_id2(a),
        Command::GkTable(a) => commands::gk_table(a),
        Command::Gram(a) => commands::gram(a),
        Command::Matelems(a) => commands::matelems(a),
        Command::Dims(a) => commands::dims(a),
        Command::DumpMatrices(a) => commands::dump_matrices(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Mismatch) => ExitCode::from(1),
        Err(e @ CliError::Engine(_)) => {
            eprintln!("paraosp: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("paraosp: {e}");
            ExitCode::from(2)
        }
    }
}
