//! Training-health and evaluation metrics.

use serde::{Deserialize, Serialize};

use crate::arena::{Action, ArenaSpec, Env, EpisodeStatus, Observation, Point, Pose, RewardParams};
use crate::error::{Error, Result};
use crate::nn::{actor_forward, NetworkWeights};
use crate::rng::{stream_rng, Stream};
use crate::strategies::TrainingRecord;

/// Per-episode reward averaged over agents.
pub type RewardCurve = Vec<f64>;

/// Entry `m` is the mean over agents of their episode-`m` reward sums.
pub fn average_reward_curve(record: &TrainingRecord) -> RewardCurve {
    record
        .rewards
        .iter()
        .map(|row| row.iter().sum::<f64>() / row.len() as f64)
        .collect()
}

/// One reward-sum curve per agent.
pub fn agent_curves(record: &TrainingRecord) -> Vec<Vec<f64>> {
    (0..record.robots).map(|i| record.agent_curve(i)).collect()
}

fn range(curve: &[f64]) -> f64 {
    let max = curve.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = curve.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Consecutive-episode jumps larger than half the curve's range.
pub fn count_catastrophic_interference(curve: &[f64]) -> usize {
    if curve.len() < 2 {
        return 0;
    }
    let threshold = 0.5 * range(curve);
    curve
        .windows(2)
        .filter(|w| (w[1] - w[0]).abs() > threshold)
        .count()
}

/// An agent whose curve ends within 1 of where it started and never spans
/// 1.5 or more.
pub fn is_failed_agent(curve: &[f64]) -> bool {
    match (curve.first(), curve.last()) {
        (Some(first), Some(last)) => (last - first).abs() <= 1.0 && range(curve) < 1.5,
        _ => false,
    }
}

pub fn count_failed_agents(record: &TrainingRecord) -> usize {
    agent_curves(record).iter().filter(|c| is_failed_agent(c)).count()
}

/// First 1-based episode whose value reaches `min + 0.8·(final − min)`,
/// where `final` is the mean of the last `tail` entries.
pub fn episodes_to_threshold(curve: &[f64], tail: usize) -> Option<usize> {
    if curve.is_empty() || tail == 0 {
        return None;
    }
    let tail = tail.min(curve.len());
    let last = curve[curve.len() - tail..].iter().sum::<f64>() / tail as f64;
    let min = curve.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = min + 0.8 * (last - min);
    curve.iter().position(|&r| r >= threshold).map(|i| i + 1)
}

/// Mean of the last `tail` entries.
pub fn final_mean(curve: &[f64], tail: usize) -> f64 {
    let tail = tail.clamp(1, curve.len().max(1));
    let slice = &curve[curve.len().saturating_sub(tail)..];
    slice.iter().sum::<f64>() / slice.len().max(1) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSpec {
    pub runs: usize,
    /// Seconds of simulated time per run.
    pub time_limit: f64,
}

impl Default for EvalSpec {
    fn default() -> Self {
        Self {
            runs: 20,
            time_limit: 60.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub success_rate: f64,
    /// Mean seconds over successful runs; absent without a success.
    pub completion_time: Option<f64>,
    pub runs: usize,
    pub successes: usize,
}

/// One evaluation rollout, enough to replay it.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalRun {
    pub start: Pose,
    pub goal: Point,
    pub actions: Vec<Action>,
    pub status: EpisodeStatus,
}

impl EvalRun {
    pub fn succeeded(&self) -> bool {
        self.status == EpisodeStatus::GoalReached
    }
}

/// Noise-free rollouts of `policy` from seeded random start/goal pairs.
pub fn evaluate_policy_logged<F>(
    mut policy: F,
    arena: &ArenaSpec,
    reward: &RewardParams,
    dt: f64,
    spec: &EvalSpec,
    seed: u64,
) -> Result<(EvalResult, Vec<EvalRun>)>
where
    F: FnMut(&Observation) -> Result<Action>,
{
    if spec.runs == 0 {
        return Err(Error::param("runs", "must be at least 1"));
    }
    if !(spec.time_limit.is_finite() && spec.time_limit > 0.0) {
        return Err(Error::param("time_limit", "must be positive"));
    }
    let max_steps = (spec.time_limit / dt).round().max(1.0) as usize;
    let mut env = Env::new(arena.clone(), *reward, dt, max_steps, stream_rng(seed, 0, Stream::Eval))?;
    let mut runs = Vec::with_capacity(spec.runs);
    for r in 0..spec.runs {
        if r > 0 {
            env.reset()?;
        }
        let (start, goal) = (env.pose(), env.goal());
        let mut actions = Vec::new();
        while !env.status().is_done() {
            let a = policy(&env.observation())?.clamped();
            env.step(&a)?;
            actions.push(a);
        }
        runs.push(EvalRun {
            start,
            goal,
            actions,
            status: env.status(),
        });
    }
    let successes: Vec<&EvalRun> = runs.iter().filter(|r| r.succeeded()).collect();
    let completion_time = if successes.is_empty() {
        None
    } else {
        Some(successes.iter().map(|r| r.actions.len() as f64 * dt).sum::<f64>() / successes.len() as f64)
    };
    let result = EvalResult {
        success_rate: successes.len() as f64 / spec.runs as f64,
        completion_time,
        runs: spec.runs,
        successes: successes.len(),
    };
    Ok((result, runs))
}

pub fn evaluate_policy<F>(
    policy: F,
    arena: &ArenaSpec,
    reward: &RewardParams,
    dt: f64,
    spec: &EvalSpec,
    seed: u64,
) -> Result<EvalResult>
where
    F: FnMut(&Observation) -> Result<Action>,
{
    evaluate_policy_logged(policy, arena, reward, dt, spec, seed).map(|(r, _)| r)
}

/// Greedy rollouts of a trained actor.
pub fn evaluate(
    actor: &NetworkWeights<f32>,
    arena: &ArenaSpec,
    reward: &RewardParams,
    dt: f64,
    spec: &EvalSpec,
    seed: u64,
) -> Result<EvalResult> {
    evaluate_policy(|obs| actor_forward(actor, obs), arena, reward, dt, spec, seed)
}

/// Replays a logged run action by action and returns the status it ends in.
pub fn replay_run(run: &EvalRun, arena: &ArenaSpec, reward: &RewardParams, dt: f64) -> Result<EpisodeStatus> {
    let mut env = Env::new(arena.clone(), *reward, dt, run.actions.len().max(1), stream_rng(0, 0, Stream::Eval))?;
    env.reset_to(run.start, run.goal)?;
    for a in &run.actions {
        env.step(a)?;
    }
    Ok(env.status())
}

/// The pieces of a per-(strategy, seed) metrics file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub strategy: String,
    pub seed: u64,
    pub r_avg_curve: Vec<f64>,
    pub n_ci: usize,
    pub n_fa: usize,
    pub rho_s: f64,
    pub t_comp: Option<f64>,
    pub comm_bytes: u64,
    pub per_agent_eval: Vec<EvalResult>,
}

impl RunMetrics {
    pub fn from_record(record: &TrainingRecord, evals: Vec<EvalResult>) -> Self {
        let curve = average_reward_curve(record);
        let rho_s = if evals.is_empty() {
            0.0
        } else {
            evals.iter().map(|e| e.success_rate).sum::<f64>() / evals.len() as f64
        };
        let times: Vec<f64> = evals.iter().filter_map(|e| e.completion_time).collect();
        let t_comp = if times.is_empty() {
            None
        } else {
            Some(times.iter().sum::<f64>() / times.len() as f64)
        };
        Self {
            strategy: record.strategy.name().to_string(),
            seed: record.seed,
            n_ci: count_catastrophic_interference(&curve),
            n_fa: count_failed_agents(record),
            r_avg_curve: curve,
            rho_s,
            t_comp,
            comm_bytes: record.ledger.total_volume(),
            per_agent_eval: evals,
        }
    }
}
