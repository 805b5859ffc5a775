use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use luders::cli::{execute, parse_tolerance, Command, Format, RunConfig};

/// Exact statevector checks of single-spin protocols for collective observables.
#[derive(Parser)]
#[command(name = "luders", version)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Seed for rotations and sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo trials for `sample`.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Tolerance override, e.g. `--tol inv=1e-12`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file and check its assertions.
    Run { input: PathBuf },
    /// Run the built-in five-stage refutation pipeline.
    Refute,
    /// Run a scenario and sample every `measure` line.
    Sample { input: PathBuf },
    /// Check whether F is a function of the four single-spin observables.
    AuditFunction,
    /// Check F and G under equal and per-site rotations.
    AuditInvariance,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (command, input) = match args.command {
        Cmd::Run { input } => (Command::Run, Some(input)),
        Cmd::Refute => (Command::Refute, None),
        Cmd::Sample { input } => (Command::Sample, Some(input)),
        Cmd::AuditFunction => (Command::AuditFunction, None),
        Cmd::AuditInvariance => (Command::AuditInvariance, None),
    };
    let rc = RunConfig {
        command,
        input,
        seed: args.seed,
        trials: args.trials,
        tolerances: args.tolerances,
        format: match args.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        },
    };
    let outcome = execute(&rc);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
