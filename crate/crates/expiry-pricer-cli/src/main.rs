//! `expiry-pricer`: equilibrium thresholds, payoffs, Monte Carlo checks,
//! analytic benchmarks, and revenue/wait frontiers for a single expiring item
//! sold over a deadline window.

mod commands;
mod config;
mod error;
mod svg;

use clap::{Args, Parser, Subcommand};
use commands::CommandContext;
use config::{OutputFormat, RunConfig};
use error::CliError;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "expiry-pricer",
    version,
    about = "Price-schedule equilibria for a single expiring item sold to strategically \
             waiting buyers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the buyer purchase-threshold for the configured schedule.
    Solve(CommonArgs),
    /// Construct the threshold and check the equilibrium conditions.
    Verify(CommonArgs),
    /// Sweep the schedule families and trace the revenue/wait frontier.
    Frontier(CommonArgs),
    /// Monte Carlo estimate of expected revenue and waiting time.
    Simulate(CommonArgs),
    /// Thin-/thick-market analytic benchmark report.
    Benchmark(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run-configuration file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory (overrides the config's output.dir).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Output format (overrides the config's output.format).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker-thread cap for sweeps and simulation.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Simulation seed (overrides the config's simulation.seed).
    #[arg(long)]
    seed: Option<u64>,
}

fn prepare(args: &CommonArgs) -> Result<CommandContext, CliError> {
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("could not configure worker pool: {e}")))?;
    }
    let mut config = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.simulation.seed = Some(seed);
    }
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let format = args.format.or(config.output.format).unwrap_or(OutputFormat::Json);
    Ok(CommandContext { config, out_dir, format })
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let (args, command): (&CommonArgs, fn(&CommandContext) -> Result<i32, CliError>) =
        match &cli.command {
            Command::Solve(a) => (a, commands::cmd_solve),
            Command::Verify(a) => (a, commands::cmd_verify),
            Command::Frontier(a) => (a, commands::cmd_frontier),
            Command::Simulate(a) => (a, commands::cmd_simulate),
            Command::Benchmark(a) => (a, commands::cmd_benchmark),
        };
    let ctx = prepare(args)?;
    command(&ctx)
}

fn main() {
    env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("EXPIRY_PRICER_LOG", "warn"),
    )
    .init();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    std::process::exit(code);
}
