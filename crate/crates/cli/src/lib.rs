//! Command-line front end for the `unimod` crate.

pub mod checks;
pub mod commands;
pub mod report;

use clap::{Parser, Subcommand, ValueEnum};
use report::Format;
use serde::Serialize;
use std::io::Write;

pub const THREADS_ENV: &str = "UNIMOD_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(name = "unimod", version, about = "Modular forms, lattices, codes, LP bounds and quasicrystal spectra")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "md")]
    pub format: Format,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Master table of cusp-form dimensions with annotations.
    Table {
        #[arg(long, default_value_t = 96)]
        dmax: u32,
    },
    /// Sanity checks and cross-module identities.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        /// Lattice enumeration node budget.
        #[arg(long, default_value_t = unimod::lattices::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Number of random LPs for the simplex check.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Shell counts and theta series of a shipped lattice.
    Theta {
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = 4)]
        max_norm: i64,
        #[arg(long, default_value_t = unimod::lattices::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Weight enumerator of a shipped code and its theta image.
    Wenum {
        #[arg(long)]
        code: String,
        /// Truncation order of the theta image.
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Numerical linear-programming bound on packing density.
    Lp {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 30)]
        degree: usize,
        #[arg(long, default_value_t = 1000)]
        n_sign: usize,
        #[arg(long, default_value_t = 1000)]
        n_pos: usize,
        #[arg(long)]
        r0_min: Option<f64>,
        #[arg(long)]
        r0_max: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        s_max: Option<f64>,
        #[arg(long, value_enum, default_value = "revised")]
        solver: SolverKind,
    },
    /// Fibonacci Hamiltonian spectrum, gap labels and spacing histogram.
    Fib {
        #[arg(long, default_value_t = 16)]
        k: u32,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 30)]
        bins: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 0.05)]
        gap_threshold: f64,
        /// Levels between unfolding knots.
        #[arg(long, default_value_t = unimod::quasicrystal::DEFAULT_UNFOLDING_WINDOW)]
        window: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Hecke,
    Deligne,
    Dims,
    Gleason,
    Theta,
    Simplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Revised,
    Tableau,
}

/// Thread count from the environment, if set.
pub fn configured_threads() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{v}`")),
        Err(_) => Ok(None),
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let threads = match configured_threads() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    if let Some(n) = threads {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let report = match commands::execute(cli, threads) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let text = report.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_CHECK_FAILED;
    }
    if report.passed {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

pub fn exit_code_for(e: &unimod::Error) -> i32 {
    use unimod::Error::*;
    match e {
        BudgetExceeded { .. } => EXIT_BUDGET,
        InvalidArgument(_) | UnknownBuiltin(_) | Parse(_) | TooLarge(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}
