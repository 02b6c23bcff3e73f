use thiserror::Error;

use crate::ledger::CommEvent;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid world state: {0}")]
    InvalidWorld(String),

    #[error("action out of limits: v = {v}, omega = {omega}")]
    ActionOutOfLimits { v: f64, omega: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty batch")]
    EmptyBatch,

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("replay buffer holds {have} transitions, {need} requested")]
    InsufficientSamples { have: usize, need: usize },

    #[error(
        "communication budget exceeded at episode {}: {:?} of {} bytes would bring the total to {total} (budget {budget})",
        event.episode, event.kind, event.bytes
    )]
    BudgetExceeded {
        event: CommEvent,
        total: u64,
        budget: u64,
    },

    #[error("no update period keeps {episodes} episodes of {per_event}-byte transfers within {budget} bytes")]
    InfeasibleBudget {
        budget: u64,
        per_event: u64,
        episodes: usize,
    },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
