//! Command-line front end: figure-data sweeps, an analytic-vs-numeric
//! verification report, and joint photon-number distribution tables.
//!
//! Exit status: 0 on success, 1 when verification comparisons fail,
//! 2 on configuration or usage errors.

mod config;
mod distribution;
mod figures;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::SweepArgs;
use figures::FigureKind;

#[derive(Parser)]
#[command(
    name = "telefock",
    about = "Continuous-variable teleportation of polarization qubits: sweeps and verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit closed-form curve data for one of the figures
    Figure {
        #[arg(value_enum)]
        which: FigureKind,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Compare the quadrature pipeline against the closed forms
    Verify {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Emit the joint photon-number table for one squeezing value and qubit
    Distribution {
        /// Squeezing parameter
        #[arg(long)]
        q: f64,
        /// Input qubit as cH_re,cH_im,cV_re,cV_im
        #[arg(long)]
        qubit: String,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Figure { which, sweep } => {
            let name = match which {
                FigureKind::Fig2 => "fig2",
                FigureKind::Fig3 => "fig3",
                FigureKind::Fig4 => "fig4",
            };
            let cfg = sweep.resolve(name, 4)?;
            figures::run(which, &cfg)?;
            Ok(true)
        }
        Command::Verify { sweep } => {
            let cfg = sweep.resolve("verify_report", 30)?;
            verify::run(&cfg)
        }
        Command::Distribution { q, qubit, sweep } => {
            let cfg = sweep.resolve("distribution", 8)?;
            let qubit = distribution::parse_qubit(&qubit)?;
            distribution::run(q, &qubit, &cfg)?;
            Ok(true)
        }
    }
}
