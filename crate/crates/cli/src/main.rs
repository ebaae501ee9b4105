//! `koenigs`: bound-state spectra, wave-functions and curvature corrections
//! on the Koenigs spaces.
//!
//! Exit codes: 0 success, 1 configuration error, 2 nothing to report (no
//! level found), 3 the space has a continuous spectrum only, 4 the oracle
//! disagrees with the solver.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod info;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, Overrides, RunConfig};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(msg: impl Into<String>) -> Self {
        Failure { code: 1, message: msg.into() }
    }

    pub fn continuous(msg: impl Into<String>) -> Self {
        Failure { code: 3, message: msg.into() }
    }

    pub fn io(e: impl fmt::Display) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<koenigs_core::Error> for Failure {
    fn from(e: koenigs_core::Error) -> Self {
        Failure::config(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "koenigs", version, about = "Bound-state spectra and wave-functions on the Koenigs spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Relative bracket width at which root refinement stops.
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    /// Scan samples per decade of |E|.
    #[arg(long, global = true)]
    scan_density: Option<f64>,
    /// Largest |E| scanned.
    #[arg(long, global = true)]
    e_max: Option<f64>,
    /// Branch signs of the effective indices, e.g. `k1=+,k2=-`.
    #[arg(long, global = true)]
    branch: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the quantization condition for the selected levels.
    Solve,
    /// Compare a closed-form special case with the solver.
    SpecialCases {
        /// Case id, e.g. ki-3 or kiii-1.
        #[arg(long)]
        case: Option<String>,
    },
    /// Curvature correction at a list of points.
    Deltav {
        /// File with one `x,y,z` point per line.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Check solver roots against the finite-difference oracle.
    Verify,
    /// Sample a normalized wave-function along a ray.
    Wavefunction {
        /// Aggregate quantum number N (canonical labels).
        #[arg(long)]
        level: Option<u32>,
    },
    /// Separating coordinate systems of the superintegrable potentials.
    Info {
        /// V1..V5 or KI..KV; all when omitted.
        id: Option<String>,
    },
}

fn load(cli: &Cli) -> Result<RunConfig, Failure> {
    let path = cli.config.as_ref().ok_or_else(|| Failure::config("--config <path> is required"))?;
    let branch = cli.branch.as_deref().map(str::parse).transpose()?;
    let ov = Overrides {
        out: cli.out.clone(),
        format: cli.format,
        tol_rel: cli.tol_rel,
        scan_density: cli.scan_density,
        e_max: cli.e_max,
        branch,
    };
    RunConfig::load(path, &ov)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if let Command::Info { id } = &cli.command {
        let t = info::table(id.as_deref())?;
        t.write(cli.format.unwrap_or_default(), cli.out.as_deref())?;
        return Ok(commands::OK);
    }
    let cfg = load(&cli)?;
    match &cli.command {
        Command::Solve => commands::solve(&cfg),
        Command::SpecialCases { case } => commands::special_cases(&cfg, case.as_deref()),
        Command::Deltav { points } => commands::deltav(&cfg, points.as_deref()),
        Command::Verify => commands::verify(&cfg),
        Command::Wavefunction { level } => commands::wavefunction(&cfg, *level),
        Command::Info { .. } => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
