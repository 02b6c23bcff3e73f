use std::fs::{self, File};
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use fedswarm::arena::{ArenaSpec, RewardParams, DEFAULT_DT};
use fedswarm::harness::{load_config, report_dir, run_experiment, ExperimentConfig};
use fedswarm::metrics::{evaluate, EvalSpec};
use fedswarm::nn::checkpoint::read_checkpoint;
use fedswarm::strategies::StrategyKind;

#[derive(Parser)]
#[command(name = "fedswarm", version, about = "Federated DDPG for simulated robot swarms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train every (strategy, seed) cell of an experiment.
    Train {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use the desk-scale preset instead of the full-scale defaults
        /// when no config file is given.
        #[arg(long, conflicts_with = "config")]
        desk: bool,
        #[arg(long = "strategy")]
        strategies: Vec<StrategyKind>,
        #[arg(long = "seed")]
        seeds: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        measured_sizes: bool,
    },
    /// Greedy evaluation of one actor checkpoint.
    Eval {
        #[arg(long)]
        weights: PathBuf,
        /// Arena spec, JSON or TOML.
        #[arg(long)]
        arena: PathBuf,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rebuild reward_curves.csv and summary.csv from a finished run.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn load_arena(path: &PathBuf) -> anyhow::Result<ArenaSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let arena: ArenaSpec = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text)?
    } else {
        toml::from_str(&text)?
    };
    arena.validate()?;
    Ok(arena)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Train {
            config,
            desk,
            strategies,
            seeds,
            out,
            measured_sizes,
        } => {
            let mut cfg = match (config, desk) {
                (Some(path), _) => load_config(&path)?,
                (None, true) => ExperimentConfig::desk(),
                (None, false) => ExperimentConfig::default(),
            };
            if !strategies.is_empty() {
                cfg.strategies = strategies;
            }
            if !seeds.is_empty() {
                cfg.seeds = seeds;
            }
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            cfg.measured_sizes |= measured_sizes;
            let manifest = run_experiment(&cfg)?;
            for cell in &manifest.cells {
                println!(
                    "{} seed {}: {:.1} s -> {}",
                    cell.strategy,
                    cell.seed,
                    cell.wall_clock_seconds,
                    cell.dir.display()
                );
            }
            println!("config {}", manifest.config_hash);
        }
        Command::Eval {
            weights,
            arena,
            runs,
            time_limit,
            seed,
        } => {
            if runs == 0 {
                bail!("--runs must be at least 1");
            }
            let mut reader = BufReader::new(File::open(&weights).with_context(|| format!("opening {}", weights.display()))?);
            let actor = read_checkpoint(&mut reader)?;
            let arena = load_arena(&arena)?;
            let spec = EvalSpec { runs, time_limit };
            let result = evaluate(&actor, &arena, &RewardParams::default(), DEFAULT_DT, &spec, seed)?;
            println!("{}", serde_json::to_string_pretty(&result)?);
        }
        Command::Report { input } => {
            let files = report_dir(&input)?;
            println!("{}", files.reward_curves.display());
            println!("{}", files.summary_csv.display());
            println!("{}", files.summary_json.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
