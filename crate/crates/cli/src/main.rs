use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperent_cli::commands::{self, AnalyzeArgs, DesignMode};
use hyperent_cli::CliError;

#[derive(Parser)]
#[command(name = "hyperent", version, about = "Engineer and analyze hyper-entangled photon pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the post-selected state of a setup file.
    Build {
        setup: PathBuf,
        /// Also write the full amplitude array, not just the nonzero terms.
        #[arg(long)]
        dense: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Design a setup file for a target state.
    Design {
        /// qudit-pol, oam-3x3, tensor, ghz-3, ghz-4 or ghz-5
        #[arg(long)]
        mode: DesignMode,
        /// Target coefficient file (not used by the ghz modes).
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Analyze the state of a setup file.
    Analyze {
        setup: PathBuf,
        /// Setup file or builtin (balanced, qutrit, ghz3, ghz4, ghz5) whose state is the fidelity reference.
        #[arg(long)]
        target: Option<String>,
        /// Optimize the CGLMP value in this local dimension.
        #[arg(long)]
        bell: Option<usize>,
        #[arg(long, env = "HYPERENT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { setup, dense, out } => emit(&commands::build(&setup, dense)?, out.as_ref()),
        Command::Design { mode, target, out } => {
            let d = commands::design(mode, target.as_deref())?;
            for n in &d.notices {
                eprintln!("notice: {n}");
            }
            eprintln!("round-trip fidelity: {:.17e}", d.fidelity);
            emit(&d.setup, out.as_ref())
        }
        Command::Analyze { setup, target, bell, seed, restarts, out } => {
            let args = AnalyzeArgs { setup: &setup, target: target.as_deref(), bell, seed, restarts };
            emit(&commands::analyze(&args)?, out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
