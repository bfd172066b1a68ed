use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use blowup_lab_cli::config::{demo_defaults, resolve, Experiment, RawConfig};
use blowup_lab_cli::experiment::execute;
use blowup_lab_cli::CliError;

#[derive(Parser)]
#[command(
    name = "blowup-lab",
    version,
    about = "Batch laboratory for blow-up experiments: runs, fences, certificates, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration: flat `key = value` lines, `#` comments
    #[arg(long)]
    config: PathBuf,
    /// Directory for the record and data files
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct DemoArgs {
    /// Optional overrides on top of the built-in demo configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for the record and data files
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Nonlinear run from configured initial data
    Simulate(RunArgs),
    /// Linearized (sign-preserving) run from point-mass data
    Linearize(RunArgs),
    /// Select parameters and maximize the blow-up certificate
    Certify(RunArgs),
    /// Evaluate the pairing fence along a linearized run
    Fence(RunArgs),
    /// Map blow-up against initial amplitude and center
    Sweep(RunArgs),
    /// Built-in run: a small pit far from the damping bump blows up
    #[command(name = "demo-instability")]
    DemoInstability(DemoArgs),
    /// Built-in run: uniform damping relaxes small data to zero
    #[command(name = "demo-stability")]
    DemoStability(DemoArgs),
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let (experiment, config, out): (Experiment, Option<&Path>, &Path) = match &cli.command {
        Command::Simulate(a) => (Experiment::Simulate, Some(&a.config), &a.out),
        Command::Linearize(a) => (Experiment::Linearize, Some(&a.config), &a.out),
        Command::Certify(a) => (Experiment::Certify, Some(&a.config), &a.out),
        Command::Fence(a) => (Experiment::Fence, Some(&a.config), &a.out),
        Command::Sweep(a) => (Experiment::Sweep, Some(&a.config), &a.out),
        Command::DemoInstability(a) => {
            (Experiment::DemoInstability, a.config.as_deref(), &a.out)
        }
        Command::DemoStability(a) => (Experiment::DemoStability, a.config.as_deref(), &a.out),
    };
    match run(experiment, config, out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(experiment: Experiment, config: Option<&Path>, out: &Path) -> Result<(), CliError> {
    let file_raw = match config {
        None => RawConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RawConfig::parse(&text)?
        }
    };
    let raw = RawConfig::with_defaults(demo_defaults(experiment), file_raw);
    let resolved = resolve(experiment, &raw)?;
    execute(resolved, out)
}
