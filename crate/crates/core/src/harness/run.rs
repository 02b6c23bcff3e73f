use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::metrics::{evaluate, RunMetrics};
use crate::nn::checkpoint::write_checkpoint;
use crate::rng::{derive_seed, Stream};
use crate::strategies::{StrategyKind, SwarmTrainer, TrainerConfig, TrainingRecord};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const FAILED_MARKER: &str = "FAILED";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellStatus {
    Completed,
    Failed { reason: String },
}

/// Where one (strategy, seed) cell put its files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellManifest {
    pub strategy: StrategyKind,
    pub seed: u64,
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub status: CellStatus,
    pub wall_clock_seconds: f64,
}

impl CellManifest {
    pub fn metrics_path(&self) -> PathBuf {
        self.dir.join("metrics.json")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub code_version: String,
    pub output_dir: PathBuf,
    pub cells: Vec<CellManifest>,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn load(dir: &Path) -> Result<Self> {
        let file = File::open(dir.join("manifest.json"))?;
        Ok(serde_json::from_reader(file)?)
    }
}

pub fn cell_dir(root: &Path, strategy: StrategyKind, seed: u64) -> PathBuf {
    root.join(strategy.name()).join(format!("seed-{seed}"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    use std::io::Write;
    w.write_all(b"\n")?;
    Ok(())
}

/// Trains every episode it can. On abort the partial record is returned
/// alongside the error.
fn train_cell(kind: StrategyKind, cfg: &ExperimentConfig, seed: u64) -> (TrainingRecord, Option<Error>) {
    let trainer_cfg = TrainerConfig {
        seed,
        ..cfg.trainer.clone()
    };
    let budget = cfg.effective_budget();
    let mut trainer = match SwarmTrainer::new(kind, &trainer_cfg, &budget) {
        Ok(t) => t,
        Err(e) => {
            let empty = TrainingRecord {
                strategy: kind,
                seed,
                episodes: 0,
                robots: trainer_cfg.robots,
                rewards: Vec::new(),
                goals: Vec::new(),
                collisions: Vec::new(),
                ledger: Default::default(),
                events: Vec::new(),
                interpretations: Vec::new(),
                actors: Vec::new(),
                critics: Vec::new(),
            };
            return (empty, Some(e));
        }
    };
    for _ in 0..trainer_cfg.episodes {
        if let Err(e) = trainer.run_episode() {
            return (trainer.finish(), Some(e));
        }
    }
    (trainer.finish(), None)
}

/// Runs, evaluates and writes one cell. A training abort is reported as a
/// failed cell plus the error that caused it.
pub fn run_cell(
    cfg: &ExperimentConfig,
    kind: StrategyKind,
    seed: u64,
    root: &Path,
) -> Result<(CellManifest, Option<Error>)> {
    let started = Instant::now();
    let dir = cell_dir(root, kind, seed);
    fs::create_dir_all(&dir)?;
    let marker = dir.join(FAILED_MARKER);
    if marker.exists() {
        fs::remove_file(&marker)?;
    }
    let (record, error) = train_cell(kind, cfg, seed);
    let mut files = Vec::new();

    let record_path = dir.join("record.json");
    write_json(&record_path, &record)?;
    files.push(record_path);
    let ledger_path = dir.join("ledger.csv");
    record.ledger.write_csv(BufWriter::new(File::create(&ledger_path)?))?;
    files.push(ledger_path);
    let summary_path = dir.join("ledger_summary.json");
    write_json(&summary_path, &record.ledger.summary())?;
    files.push(summary_path);

    if let Some(e) = error {
        fs::write(&marker, format!("{e}\n"))?;
        files.push(marker);
        let cell = CellManifest {
            strategy: kind,
            seed,
            dir,
            files,
            status: CellStatus::Failed { reason: e.to_string() },
            wall_clock_seconds: started.elapsed().as_secs_f64(),
        };
        return Ok((cell, Some(e)));
    }

    let arenas = cfg.trainer.resolved_arenas();
    let evals = record
        .actors
        .iter()
        .enumerate()
        .map(|(i, actor)| {
            evaluate(
                actor,
                &arenas[i],
                &cfg.trainer.reward,
                cfg.trainer.dt,
                &cfg.eval,
                derive_seed(seed, i, Stream::Eval),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let metrics = RunMetrics::from_record(&record, evals);
    let metrics_path = dir.join("metrics.json");
    write_json(&metrics_path, &metrics)?;
    files.push(metrics_path);

    for (i, (actor, critic)) in record.actors.iter().zip(&record.critics).enumerate() {
        for (name, net) in [("actor", actor), ("critic", critic)] {
            let path = dir.join(format!("{name}_{i}.ckpt"));
            write_checkpoint(net, &mut BufWriter::new(File::create(&path)?))?;
            files.push(path);
        }
    }

    let cell = CellManifest {
        strategy: kind,
        seed,
        dir,
        files,
        status: CellStatus::Completed,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    Ok((cell, None))
}

/// Runs every (strategy, seed) cell in order, writes `manifest.json` and the
/// plot CSVs. A failed cell stops the experiment after its partial outputs
/// and the manifest are on disk.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunManifest> {
    cfg.validate()?;
    let started = Instant::now();
    let root = cfg.output_dir.clone();
    fs::create_dir_all(&root)?;
    let mut manifest = RunManifest {
        config_hash: cfg.hash()?,
        code_version: CODE_VERSION.to_string(),
        output_dir: root.clone(),
        cells: Vec::new(),
        wall_clock_seconds: 0.0,
    };
    let mut failure = None;
    'cells: for &kind in &cfg.strategies {
        for &seed in &cfg.seeds {
            let (cell, error) = run_cell(cfg, kind, seed, &root)?;
            manifest.cells.push(cell);
            if error.is_some() {
                failure = error;
                break 'cells;
            }
        }
    }
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    write_json(&root.join("manifest.json"), &manifest)?;
    fs::write(root.join("config.toml"), cfg.to_toml()?)?;
    if let Some(e) = failure {
        return Err(e);
    }
    super::report::emit_plot_data(std::slice::from_ref(&manifest), &root)?;
    Ok(manifest)
}
