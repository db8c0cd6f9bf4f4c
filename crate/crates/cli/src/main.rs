//! `qsm`: phase-space quantum statistics of harmonic oscillators from the
//! command line. Every subcommand writes one CSV table.

mod commands;
mod config;
mod error;
mod format;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{BetaSpec, Command, RunConfig, Settings};
use error::CliError;

/// Worker threads for the quadrature; unset uses every core.
const THREADS_VAR: &str = "QSM_THREADS";

#[derive(Parser)]
#[command(name = "qsm", version, about = "Phase-space quantum statistics of harmonic oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weighted commutation function in three representations against the Boltzmann factor
    WeightProfile(Flags),
    /// Monomer and dimer grand potentials, closed form against quadrature
    GrandPotential(Flags),
    /// Average energy of bosons and fermions, closed form against quadrature
    Energy(Flags),
    /// Local harmonic modes of a Lennard-Jones chain and their commutation weight
    MeanfieldDemo(Flags),
}

#[derive(Args, Clone)]
struct Flags {
    /// TOML file of key = value settings, optionally in per-command sections
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inverse temperatures: `a,b,c` or `start:stop:steps`
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    /// boson or fermion
    #[arg(long)]
    stats: Option<String>,
    /// exact, bigw or smallw
    #[arg(long = "w-method")]
    w_method: Option<String>,
    /// Highest quantum number kept in the exact series (default: adaptive)
    #[arg(long)]
    nmax: Option<usize>,
    /// Loop cut-off on neighbour separations
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Flags {
    fn settings(&self) -> Result<Settings, CliError> {
        Ok(Settings {
            beta: self.beta.as_deref().map(BetaSpec::parse).transpose()?,
            z: self.z,
            d: self.d,
            stats: self.stats.clone(),
            w_method: self.w_method.clone(),
            nmax: self.nmax,
            cutoff: self.cutoff,
            out: self.out.clone(),
            seed: self.seed,
            ..Settings::default()
        })
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{THREADS_VAR} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start {n} worker threads: {e}")))
}

fn execute(command: Command, flags: &Flags) -> Result<(), CliError> {
    configure_threads()?;
    let mut settings = match &flags.config {
        Some(path) => Settings::from_file(path, command)?,
        None => Settings::default(),
    };
    settings.overlay(&flags.settings()?);
    let cfg = RunConfig::resolve(command, &settings)?;
    let csv = commands::run(&cfg)?.render(&cfg.header());
    match &cfg.out {
        Some(path) => std::fs::write(path, csv).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(csv.as_bytes())
            .map_err(|source| CliError::Io {
                path: "standard output".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("qsm: {line}");
            return ExitCode::from(2);
        }
    };
    let (command, flags) = match &cli.command {
        Cmd::WeightProfile(f) => (Command::WeightProfile, f),
        Cmd::GrandPotential(f) => (Command::GrandPotential, f),
        Cmd::Energy(f) => (Command::Energy, f),
        Cmd::MeanfieldDemo(f) => (Command::MeanfieldDemo, f),
    };
    match execute(command, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsm: {}", e.to_string().replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
