//! `photoloc`: radial scans, surfaces, verification suites and falloff fits.

mod commands;
mod config;
mod error;

use clap::{Parser, Subcommand};
use config::{ModelArg, ScanArgs, SurfaceArgs};
use error::CliError;
use photoloc::diagnostics::FitOptions;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "photoloc", version, about = "Localized photon wave packets: datasets, checks and fits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Radial profile of |Z|, |dZ/dtau| or |F|^2 at fixed (z, tau) as CSV.
    Scan(ScanArgs),
    /// Modulus and real part of Z over an (x, z) plane at fixed tau as CSV.
    Surface(SurfaceArgs),
    /// Run a verification suite and print its JSON report.
    Verify {
        /// quadrature, lorentz, invariance, residual, falloff or pw-tradeoff.
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Fit a falloff model to the rho and modulus columns of a CSV file.
    Fit {
        input: PathBuf,
        #[arg(long = "window-min", allow_hyphen_values = true)]
        window_min: Option<f64>,
        #[arg(long = "window-max", allow_hyphen_values = true)]
        window_max: Option<f64>,
        #[arg(long, value_enum, default_value = "auto")]
        model: ModelArg,
        /// Also fit a first-order correction to the power-law prefactor.
        #[arg(long)]
        subleading: bool,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Scan(args) => commands::scan(&args.into_config()?).map(|_| true),
        Command::Surface(args) => commands::surface(&args.into_config()?).map(|_| true),
        Command::Verify { suite, seed, output } => {
            commands::verify(&suite, seed, output.as_deref()).map(|report| report.pass)
        }
        Command::Fit {
            input,
            window_min,
            window_max,
            model,
            subleading,
        } => {
            let options = FitOptions {
                subleading,
                ..FitOptions::default()
            };
            commands::fit(&input, [window_min, window_max], model.into(), &options).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
