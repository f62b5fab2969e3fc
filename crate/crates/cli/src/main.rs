mod commands;
mod config;
mod csv;

use std::env;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CircuitArgs, Dispersion3dArgs, DispersionArgs, EvolveArgs, GapScanArgs, SeaArgs};

pub const THREADS_ENV: &str = "DIRACSEA_THREADS";

/// Discrete-spacetime Dirac walks: dispersion, gap scans, lattice evolution,
/// Dirac-sea bookkeeping and qubit-circuit checks. Physics inputs are
/// dimensionless (m c² δt, p δx, E δt); output is CSV.
#[derive(Debug, Parser)]
#[command(name = "diracsea", version)]
pub struct Cli {
    /// `key = value` file supplying defaults for the chosen subcommand
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Write the CSV here instead of stdout
    #[arg(short, long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Lattice spacing; with --c, rescales momentum and energy columns to physical units
    #[arg(long, global = true)]
    pub dx: Option<f64>,

    /// Speed of light used together with --dx
    #[arg(long, global = true)]
    pub c: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasi-energy bands of the 1-D walk on a uniform momentum grid
    Dispersion(DispersionArgs),
    /// Gap check of the modified walk for a list of mass phases
    GapScan(GapScanArgs),
    /// Position-space evolution from a localized start
    Evolve(EvolveArgs),
    /// Qubit circuit against the fermionic QCA, sector by sector
    CircuitVerify(CircuitArgs),
    /// Particle-hole pair energies above the Dirac sea, folded
    Sea(SeaArgs),
    /// Band slices of the 3-D walk
    Dispersion3d(Dispersion3dArgs),
}

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "invalid input: {m}"),
            Failure::Numerical(m) => write!(f, "numerical check failed: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<diracsea_core::Error> for Failure {
    fn from(e: diracsea_core::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

/// CSV plus an optional failed numerical check. The table is written either way.
pub struct Report {
    pub table: csv::Table,
    pub failed_check: Option<String>,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Validation(format!("{THREADS_ENV} = '{raw}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Validation(e.to_string()))
}

fn emit(table: &csv::Table, output: Option<&PathBuf>) -> Result<(), Failure> {
    let text = table.render();
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn run() -> Result<(), Failure> {
    let args = config::with_config_defaults(env::args_os().collect())?;
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    configure_threads()?;
    let report = commands::dispatch(&cli)?;
    emit(&report.table, cli.output.as_ref())?;
    match report.failed_check {
        Some(msg) => Err(Failure::Numerical(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("diracsea: {f}");
            ExitCode::from(f.code())
        }
    }
}
