//! `ruelle`: length spectra, identity checks and torsion reports.
//!
//! Exit codes: 0 pass, 2 input error, 3 precondition violation,
//! 4 hypothesis violation, 5 residual failure.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::VerifyKind;
use config::{Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "ruelle", version, about = "Geodesic spectra, Ruelle L-function identities and twisted torsion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Presentation file; overrides the config.
    #[arg(long, global = true)]
    presentation: Option<PathBuf>,
    /// Character as rational turns, e.g. "1/4" or "1/3,0".
    #[arg(long, global = true, allow_hyphen_values = true)]
    rho: Option<String>,
    /// Geodesic length cutoff L.
    #[arg(long, global = true)]
    max_length: Option<f64>,
    /// Word length bound W.
    #[arg(long, global = true)]
    max_word: Option<usize>,
    /// Convergence abscissa; must exceed 2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    abscissa: Option<f64>,
    /// Optional positive constant delta_rho for the report.
    #[arg(long, global = true)]
    delta_rho: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the length spectrum and write spectrum.csv.
    Spectrum,
    /// Run one family of identity checks.
    Verify {
        #[arg(value_enum)]
        which: Which,
    },
    /// Torsion and twisted Alexander report.
    Torsion,
    /// Spectrum, convergent-region residuals and torsion in one report.
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Transforms,
    Cancellation,
    Rs,
    Prop31,
}

fn run(cli: Cli) -> Result<String, error::CliError> {
    let f = cli.flags;
    let overrides = Overrides {
        config: f.config,
        presentation: f.presentation,
        rho: f.rho,
        max_length: f.max_length,
        max_word: f.max_word,
        abscissa: f.abscissa,
        delta_rho: f.delta_rho,
        out: f.out,
        seed: f.seed,
    };
    let cfg = RunConfig::load(&overrides)?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Verify { which } => {
            let kind = match which {
                Which::Transforms => VerifyKind::Transforms,
                Which::Cancellation => VerifyKind::Cancellation,
                Which::Rs => VerifyKind::Rs,
                Which::Prop31 => VerifyKind::Prop31,
            };
            commands::verify(&cfg, kind)
        }
        Command::Torsion => commands::torsion(&cfg),
        Command::Report => commands::report(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
