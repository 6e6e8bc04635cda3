//! `fluctem`: scenario runner emitting reproducible CSV tables.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure
//! (non-convergence, failed cross-check), 1 anything else (I/O).

mod config;
mod output;
mod run;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fluctem_core::Error;

use output::{write_table, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::InvalidSequence { .. }
            | Error::Domain { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fluctem", version = concat!(env!("CARGO_PKG_VERSION"), " (", env!("FLUCTEM_GIT_HASH"), ")"))]
#[command(about = "Fluctuation-induced friction and drag: reproducible CSV scenarios")]
struct Cli {
    /// Flat TOML file of `key = value` parameters; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Quadrature tolerance (relative).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lossless-limit traces and separation profiles of the field spectral density.
    Spectra(run::SpectraFlags),
    /// Quanta in the peak channel and grid friction force against time.
    FrictionDynamics(run::FrictionFlags),
    /// Stationary friction force over a velocity or separation sweep.
    PendryForce(run::PendryFlags),
    /// Drag force on a particle above a drifting plate.
    DragForce(run::DragFlags),
    /// Kramers-Kronig residuals of the Drude and plasma models.
    KkCheck(run::KkFlags),
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config(
                "invalid parameter `threads` = 0: must be >= 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!(
                "invalid parameter `tol` = {tol}: must be finite and > 0"
            )));
        }
    }
    let file = match &cli.config {
        Some(path) => config::load_table(path)?,
        None => toml::Table::new(),
    };

    let mut deferred = None;
    let (name, echo, table): (&str, Vec<String>, Table) = match &cli.command {
        Command::Spectra(f) => {
            let p: run::SpectraParams = config::resolve(file, f, cli.tol)?;
            ("spectra", config::echo(&p), run::run_spectra(&p)?)
        }
        Command::FrictionDynamics(f) => {
            let p: run::FrictionParams = config::resolve(file, f, cli.tol)?;
            (
                "friction-dynamics",
                config::echo(&p),
                run::run_friction(&p)?,
            )
        }
        Command::PendryForce(f) => {
            let p: run::PendryParams = config::resolve(file, f, cli.tol)?;
            ("pendry-force", config::echo(&p), run::run_pendry(&p)?)
        }
        Command::DragForce(f) => {
            let p: run::DragParams = config::resolve(file, f, cli.tol)?;
            let (table, failures) = run::run_drag(&p)?;
            if failures > 0 {
                deferred = Some(CliError::Numerical(format!(
                    "{failures} drag row(s) failed; see the status column"
                )));
            }
            ("drag-force", config::echo(&p), table)
        }
        Command::KkCheck(f) => {
            let p: run::KkParams = config::resolve(file, f, cli.tol)?;
            ("kk-check", config::echo(&p), run::run_kk(&p)?)
        }
    };

    for note in &table.notes {
        eprintln!("warning: {note}");
    }
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_table(&mut w, name, &echo, &table)?;
            w.flush()?;
        }
        None => write_table(std::io::stdout().lock(), name, &echo, &table)?,
    }
    deferred.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fluctem: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
