//! holo-ee: perfect-tensor certification, holographic entropy checks, and
//! the simulated NMR pipeline.
//!
//! Exit codes: 0 success, 2 scientific check failed, 3 input/config error.

mod commands;
mod report;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "holo-ee",
    version,
    about = "Perfect-tensor networks, holographic entanglement entropy, and NMR decoherence runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the searched 6-qubit graph state as a perfect tensor.
    VerifyPt(commands::VerifyPtArgs),
    /// Entropy of the cyclic k-windows for the ideal, noisy, or compensated state.
    EntropyCurve(commands::EntropyCurveArgs),
    /// Compare boundary entropies against minimal cuts on hexagonal networks.
    RtCheck(commands::RtCheckArgs),
    /// Simulate the decohered run, emulated tomography, and compensation.
    NmrRun(commands::NmrRunArgs),
    /// Minimal cut of a boundary region on a network file.
    Mincut(commands::MincutArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 3u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::VerifyPt(args) => commands::cmd_verify_pt(args),
        Command::EntropyCurve(args) => commands::cmd_entropy_curve(args),
        Command::RtCheck(args) => commands::cmd_rt_check(args),
        Command::NmrRun(args) => commands::cmd_nmr_run(args),
        Command::Mincut(args) => commands::cmd_mincut(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
