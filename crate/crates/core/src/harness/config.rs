use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arena::{ArenaSpec, Rect, OBS_DIM};
use crate::error::{Error, Result};
use crate::ledger::{CommBudget, MB};
use crate::metrics::EvalSpec;
use crate::nn::{actor_layers, critic_layers, serialized_size, NetworkWeights};
use crate::strategies::{StrategyKind, TrainerConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub trainer: TrainerConfig,
    pub strategies: Vec<StrategyKind>,
    pub seeds: Vec<u64>,
    pub budget: CommBudget,
    pub output_dir: PathBuf,
    pub eval: EvalSpec,
    /// Charge federated rounds with the actual serialized model size
    /// instead of the nominal one.
    pub measured_sizes: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            trainer: TrainerConfig::default(),
            strategies: StrategyKind::ALL.to_vec(),
            seeds: vec![0, 1, 2],
            budget: CommBudget::default(),
            output_dir: PathBuf::from("runs"),
            eval: EvalSpec::default(),
            measured_sizes: false,
        }
    }
}

/// 5 m × 5 m layouts used by the desk preset, one small obstacle each.
pub fn desk_arenas(robots: usize) -> Vec<ArenaSpec> {
    let layouts = [
        vec![Rect::new(2.25, 2.25, 2.75, 2.75)],
        vec![Rect::new(1.2, 3.0, 1.8, 3.6)],
        vec![Rect::new(3.2, 1.2, 3.8, 1.8)],
        vec![],
    ];
    (0..robots)
        .map(|i| ArenaSpec::open(5.0, 5.0).with_obstacles(layouts[i % layouts.len()].clone()))
        .collect()
}

impl ExperimentConfig {
    /// Small swarm, short episodes and narrow networks; minutes on one core.
    pub fn desk() -> Self {
        let trainer = TrainerConfig {
            episodes: 30,
            steps_per_episode: 256,
            robots: 4,
            hidden: 64,
            batch_size: 64,
            target_every: 128,
            arenas: desk_arenas(4),
            ..TrainerConfig::default()
        };
        Self {
            trainer,
            seeds: vec![0, 1, 2, 3, 4],
            budget: CommBudget {
                total_budget: 33 * MB,
                ..CommBudget::default()
            },
            output_dir: PathBuf::from("runs/desk"),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.trainer.validate()?;
        self.budget.validate()?;
        if self.strategies.is_empty() {
            return Err(Error::param("strategies", "at least one strategy is required"));
        }
        if self.seeds.is_empty() {
            return Err(Error::param("seeds", "at least one seed is required"));
        }
        if self.eval.runs == 0 {
            return Err(Error::param("eval.runs", "must be at least 1"));
        }
        if !(self.eval.time_limit.is_finite() && self.eval.time_limit > 0.0) {
            return Err(Error::param("eval.time_limit", "must be positive"));
        }
        Ok(())
    }

    /// The budget actually charged, after `measured_sizes` is applied.
    pub fn effective_budget(&self) -> CommBudget {
        if !self.measured_sizes {
            return self.budget;
        }
        let (critic_specs, side) = critic_layers(OBS_DIM, self.trainer.hidden);
        let shapes = NetworkWeights::<f32>::zeros(actor_layers(OBS_DIM, self.trainer.hidden), None)
            .and_then(|a| Ok((a, NetworkWeights::<f32>::zeros(critic_specs, Some(side))?)));
        let per_agent = match shapes {
            Ok((actor, critic)) => serialized_size(&actor) + serialized_size(&critic),
            Err(_) => return self.budget,
        };
        CommBudget {
            model_oneway: per_agent * self.trainer.robots as u64,
            ..self.budget
        }
    }

    /// SHA-256 over the canonical JSON form (object keys sorted).
    pub fn hash(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        let bytes = serde_json::to_vec(&value)?;
        let digest = Sha256::digest(&bytes);
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    ExperimentConfig::from_toml(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save_config(cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    fs::write(path, cfg.to_toml()?)?;
    Ok(())
}
