mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Flags, RunConfig, Settings};
use crate::error::{CliError, EX_USAGE};

#[derive(Parser)]
#[command(name = "widths", version, about = "Min-max widths of planar domains")]
struct Cli {
    /// Sampling seed.
    #[arg(long, global = true)]
    seed: Option<u32>,
    /// Tolerance, either a bare geometric tolerance or KEY=VALUE (keys: geometric, margin).
    #[arg(long, global = true)]
    tol: Vec<String>,
    /// Crofton grid as THETAxRHO, e.g. 256x512.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Write the JSON/CSV report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON run configuration; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Sweepout sampling budget.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write a drawing here.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the p-width of a domain: `certify 2 ellipse 1.02 0.98`.
    Certify {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        p: u8,
        /// `disk` or `ellipse A B`.
        #[arg(required = true, num_args = 1..)]
        domain: Vec<String>,
    },
    /// Maximize the clipped length over the parabola family.
    Maxlen,
    /// Closed billiard orbit: `billiard DOMAIN K [START_T]`.
    Billiard {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Crofton length estimates.
    Crofton {
        #[command(subcommand)]
        command: CroftonCommand,
    },
    /// Geodesic network files.
    Network {
        #[command(subcommand)]
        command: NetworkCommand,
    },
    /// Sampled sup-lengths of the projective classes up to p.
    Sweepout {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=4))]
        p: u8,
    },
}

#[derive(Subcommand)]
enum CroftonCommand {
    /// Length of a conic inside a domain: `crofton conic "c0 c1 c2 c3 c4"`.
    Conic {
        coeffs: String,
        /// `disk` or `ellipse A B`; defaults to the unit disk.
        #[arg(long, num_args = 1..=3)]
        domain: Vec<String>,
    },
    /// Local mass scan over small balls.
    Scan {
        #[arg(long, default_value_t = 4)]
        p: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1,0.05")]
        radii: Vec<f64>,
        /// Emit JSON instead of CSV.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum NetworkCommand {
    /// Stationarity, integrality and density report.
    Check {
        file: PathBuf,
        /// Density ratio bound; defaults to 3*sqrt(2).
        #[arg(long)]
        mu: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.config.as_deref().map(RunConfig::load).transpose()?;
    let flags = Flags { seed: cli.seed, tol: cli.tol, grid: cli.grid, samples: cli.samples, out: cli.out, svg: cli.svg };
    let settings = Settings::resolve(flags, config)?;
    widths_core::tol::set_geometric(settings.geometric_tol);
    match cli.command {
        Command::Certify { p, domain } => commands::certify(p as usize, &domain, &settings),
        Command::Maxlen => commands::maxlen(&settings),
        Command::Billiard { args } => commands::billiard(&args, &settings),
        Command::Crofton { command: CroftonCommand::Conic { coeffs, domain } } => {
            commands::crofton_conic(&coeffs, &domain, &settings)
        }
        Command::Crofton { command: CroftonCommand::Scan { p, radii, json } } => {
            commands::crofton_scan(p, &radii, json, &settings)
        }
        Command::Network { command: NetworkCommand::Check { file, mu } } => commands::network_check(&file, mu, &settings),
        Command::Sweepout { p } => commands::sweepout(p as usize, &settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EX_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("widths: {e}");
            ExitCode::from(e.code)
        }
    }
}
