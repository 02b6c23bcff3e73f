//! Configuration, experiment execution and result files.
//!
//! Output layout under `output_dir`:
//!
//! ```text
//! manifest.json  config.toml  reward_curves.csv  summary.csv  summary.json
//! <strategy>/seed-<n>/record.json
//!                     ledger.csv  ledger_summary.json
//!                     metrics.json
//!                     actor_<i>.ckpt  critic_<i>.ckpt
//!                     FAILED          (only after an abort)
//! ```

mod config;
mod report;
mod run;

pub use config::{desk_arenas, load_config, save_config, ExperimentConfig};
pub use report::{emit_plot_data, load_metrics, report_dir, summarize, PlotFiles, StrategySummary};
pub use run::{cell_dir, run_cell, run_experiment, CellManifest, CellStatus, RunManifest, CODE_VERSION, FAILED_MARKER};

use crate::error::Result;
use crate::metrics::{average_reward_curve, RewardCurve};
use crate::strategies::{run_training, StrategyKind, TrainerConfig};
use crate::ledger::CommBudget;

/// Reward curve of the untrained, randomly initialized policy collecting
/// data exactly as a learner would, but never updated.
pub fn frozen_policy_baseline(cfg: &TrainerConfig) -> Result<RewardCurve> {
    let frozen = TrainerConfig {
        train_every: cfg.steps_per_episode + 1,
        target_every: cfg.steps_per_episode + 1,
        ..cfg.clone()
    };
    let record = run_training(StrategyKind::Iddpg, &frozen, &CommBudget::default())?;
    Ok(average_reward_curve(&record))
}
