use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mps::config::resolve_config;
use mps::run::{run, write_diagnostic, RunError, EXIT_INPUT};
use mps::Command;

#[derive(Parser)]
#[command(name = "mps", version, about = "Micropolar fixed-point solver and verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override a configuration key, e.g. `--set params.epsilon=0.25`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; replaces `run.output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// Solve the regularized system and write the solution snapshot and trace.
    Solve(Common),
    /// Residual, energy, trilinear and regularity reports for a snapshot.
    Verify(Common),
    /// Localized energy ledger and decay scans for a snapshot.
    Liouville(Common),
    /// Continuation in (epsilon, R) and homotopy in lambda.
    Sweep(Common),
}

fn init_threads() {
    let Ok(raw) = std::env::var("MPS_THREADS") else { return };
    match raw.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("MPS_THREADS ignored: {e}");
            }
        }
        Err(_) => log::warn!("MPS_THREADS must be a non-negative integer, got {raw:?}"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    init_threads();
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Solve(c) => (Command::Solve, c),
        Sub::Verify(c) => (Command::Verify, c),
        Sub::Liouville(c) => (Command::Liouville, c),
        Sub::Sweep(c) => (Command::Sweep, c),
    };
    let loaded = fs::read_to_string(&common.config)
        .map_err(|e| RunError::Input(format!("cannot read {}: {e}", common.config.display())))
        .and_then(|text| Ok(resolve_config(&text, &common.set, Some(command), common.out.as_deref())?));
    let code = match loaded {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(dir) = &common.out {
                let _ = write_diagnostic(dir, &e, serde_json::Value::Null);
            }
            EXIT_INPUT
        }
    };
    ExitCode::from(code as u8)
}
