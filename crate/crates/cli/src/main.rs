//! `dnls`: batch front end for ground-state computations.
//!
//! Exit status: 0 on success, 2 on non-convergence or failed verification,
//! 1 on config and input errors. Set `DNLS_LOG` (e.g. `info`, `debug`) for
//! log output on stderr.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Status;

#[derive(Parser)]
#[command(
    name = "dnls",
    version,
    about = "Ground states of -Δu + V u = f(x, u) on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and write its result record.
    Solve { config: PathBuf },
    /// Re-check a stored result: pointwise equation, Nehari set, inf-max rays.
    Verify { result: PathBuf },
    /// Solve every point of the cartesian grid in `[sweep]`.
    Sweep { config: PathBuf },
    /// Ground-state energies on Dirichlet boxes of increasing size.
    Truncate { config: PathBuf },
    /// Compare a bounded-well problem with its constant limit problem.
    Compare { config: PathBuf },
    /// Per-vertex CSV of coordinates, u, V and residual.
    ExportPlotdata { result: PathBuf, out: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DNLS_LOG", "warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve { config } => commands::solve(config),
        Command::Verify { result } => commands::verify(result),
        Command::Sweep { config } => commands::sweep(config),
        Command::Truncate { config } => commands::truncate(config),
        Command::Compare { config } => commands::compare(config),
        Command::ExportPlotdata { result, out } => commands::export_plotdata(result, out),
    };
    match outcome {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
