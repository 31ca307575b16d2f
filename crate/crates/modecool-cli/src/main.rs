//! Batch CLI: `modecool <command> --config <path> --out <dir> [--force-order]`.
//!
//! Exit codes: 0 success, 1 config/schema error, 2 domain infeasibility.
//! Every run writes `result.toml` and `table.csv` into the output directory;
//! failures write `error.toml` instead.

mod config;
mod output;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "modecool", version, about = "Dissipative multimode Gaussian state engineering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a target Gaussian map and report its covariance matrix.
    BuildState(JobArgs),
    /// Synthesize the multi-tone modulation plan for a target.
    Synthesize(JobArgs),
    /// Census of exact and near resonances of the multi-tone drive.
    Resonances(JobArgs),
    /// |n|=3 correction audit of a GHZ protocol (fidelity penalty sweep).
    Audit(JobArgs),
    /// Chain normal modes, transformed targets and chain modulation plans.
    Chain(JobArgs),
    /// Frequency-layout feasibility sweep over register size.
    Plan(JobArgs),
    /// Steady state of the cooled register at finite cooperativity.
    Cool(JobArgs),
    /// Overlap of two pure Gaussian targets.
    Fidelity(JobArgs),
}

#[derive(clap::Args)]
struct JobArgs {
    /// Path to the TOML job configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Allow resonance searches beyond the order/size complexity guard.
    #[arg(long, default_value_t = false)]
    force_order: bool,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::BuildState(_) => "build-state",
            Command::Synthesize(_) => "synthesize",
            Command::Resonances(_) => "resonances",
            Command::Audit(_) => "audit",
            Command::Chain(_) => "chain",
            Command::Plan(_) => "plan",
            Command::Cool(_) => "cool",
            Command::Fidelity(_) => "fidelity",
        }
    }

    fn args(&self) -> &JobArgs {
        match self {
            Command::BuildState(a)
            | Command::Synthesize(a)
            | Command::Resonances(a)
            | Command::Audit(a)
            | Command::Chain(a)
            | Command::Plan(a)
            | Command::Cool(a)
            | Command::Fidelity(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let args = cli.command.args();

    if let Err(e) = fs::create_dir_all(&args.out) {
        eprintln!("modecool: cannot create output directory: {e}");
        return ExitCode::from(1);
    }

    let text = match fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("modecool: cannot read config: {e}");
            let _ = output::write_error(&args.out, name, "config", &format!("cannot read config: {e}"));
            return ExitCode::from(1);
        }
    };
    let job = match config::parse(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("modecool: {e}");
            let _ = output::write_error(&args.out, name, "config", &e.0);
            return ExitCode::from(1);
        }
    };

    match run::execute(name, &job, &args.out, args.force_order) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("modecool: {}", e.message());
            let _ = output::write_error(&args.out, name, e.kind(), &e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
