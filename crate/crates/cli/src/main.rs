use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rotor_cli::{execute, load_config, CliError, Overrides};

/// Deterministic multi-agent rotor-router image transitions and
/// animations.
#[derive(Parser)]
#[command(name = "rotor", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a TOML config file.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the run config (TOML).
    config: PathBuf,
    /// Output directory (overrides the config's `out`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Snapshot every N steps (overrides the config's schedule).
    #[arg(long, value_name = "N")]
    frames_every: Option<u64>,
    /// Step budget (overrides the config's `t_max`).
    #[arg(long, value_name = "N")]
    t_max: Option<u64>,
    /// Expand this preset (overrides the config's `preset`).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Replace rotor stepping with seeded uniform random moves.
    #[arg(long)]
    baseline: bool,
    /// Seed for baseline runs.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Validate the config and exit without running.
    #[arg(long)]
    validate_only: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.code());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let overrides = Overrides {
                out: args.out,
                frames_every: args.frames_every,
                t_max: args.t_max,
                preset: args.preset,
                baseline: args.baseline,
                seed: args.seed,
            };
            let config = load_config(&args.config, &overrides)?;
            if args.validate_only {
                println!(
                    "config ok: {} mode, {} grid, {} agent(s), t_max {}",
                    config.mode,
                    config.dims,
                    config.agents.len(),
                    config.t_max
                );
                return Ok(());
            }
            let outcome = execute(&config)?;
            println!(
                "wrote {} frames to {}",
                outcome.frames,
                outcome.out_dir.display()
            );
            println!("coverage: {:.6}", outcome.report.coverage);
            Ok(())
        }
    }
}
