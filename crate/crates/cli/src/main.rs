use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

mod cache;
mod commands;
mod render;

/// Census and verification of orientably-regular maps on `M(q^2)`.
#[derive(Debug, Parser)]
#[command(name = "twistmaps", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Directory holding cached census and oracle results.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for orbit enumeration; 0 uses every core.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Largest q accepted by orbit enumeration.
    #[arg(long, default_value_t = commands::DEFAULT_MAX_Q, global = true)]
    pub max_q: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Closed-form identities only.
    Formulas,
    /// Oracle orbit partition against the per-case orbit counts.
    Orbits,
    /// Oracle maps, reflexible maps and Frobenius bundles against the formulas.
    Bruteforce,
    /// Oracle self-duality counts against the reference table.
    Selfdual,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of maps (and reflexible maps) for q = p^f.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: u32,
        /// Also report reflexible counts.
        #[arg(long)]
        reflexible: bool,
    },
    /// Compare formulas with the oracle; exit 0 iff everything matches.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Level::Formulas)]
        level: Level,
        /// Lift the brute-force bound of q <= 9; above it only the partition is compared.
        #[arg(long)]
        allow_large: bool,
    },
    /// Self-duality counts for both forms of y.
    Selfdual {
        #[arg(long)]
        q: u64,
    },
    /// One row per orbit of non-singular pairs.
    Orbits {
        #[arg(long)]
        q: u64,
        /// Keep only orbits of type (k,l).
        #[arg(long = "type", value_parser = parse_type)]
        kind: Option<(u64, u64)>,
        /// One row per Frobenius bundle.
        #[arg(long)]
        fuse: bool,
    },
}

fn parse_type(s: &str) -> Result<(u64, u64), String> {
    let (k, l) = s.split_once(',').ok_or("expected k,l")?;
    let k = k.trim().parse().map_err(|e| format!("k: {e}"))?;
    let l = l.trim().parse().map_err(|e| format!("l: {e}"))?;
    Ok((k, l))
}

/// Failures with a dedicated exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Resource(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Resource(m) => write!(f, "resource limit: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

/// Exit status of a completed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Mismatch,
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn run(cli: &Cli) -> Result<Outcome> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("configuring worker pool")?;
    }
    let mut out = std::io::stdout().lock();
    commands::dispatch(cli, &mut out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(EXIT_MISMATCH),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Failure>() {
                Some(Failure::Usage(_)) => ExitCode::from(EXIT_USAGE),
                Some(Failure::Resource(_)) => ExitCode::from(EXIT_RESOURCE),
                None => ExitCode::from(EXIT_MISMATCH),
            }
        }
    }
}
