//! Single-agent DDPG: exploration, TD targets, the coupled critic/actor
//! update, and hard target synchronization. All four swarm strategies share
//! this code unchanged.

mod replay;

pub use replay::{ReplayBuffer, Transition};

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::arena::{Action, Observation, ACTION_DIM, OBS_DIM};
use crate::error::{Error, Result};
use crate::nn::{
    actor_forward, actor_forward_batch, adam_step, backprop_actor, critic_forward_batch,
    critic_regression, new_actor, new_critic, AdamConfig, AdamState, Direction, NetworkWeights,
};

/// Additive Gaussian exploration, per action dimension.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplorationNoise {
    pub sigma_v: f64,
    pub sigma_omega: f64,
}

impl Default for ExplorationNoise {
    fn default() -> Self {
        Self {
            sigma_v: 0.025,
            sigma_omega: PI / 20.0,
        }
    }
}

impl ExplorationNoise {
    pub fn none() -> Self {
        Self {
            sigma_v: 0.0,
            sigma_omega: 0.0,
        }
    }
}

/// `clamp(π(s) + N(0, σ²), limits)`. Two normal draws are consumed per call
/// whatever σ is, so the stream stays aligned across configurations.
pub fn act_with_exploration<R: Rng + ?Sized>(
    actor: &NetworkWeights<f32>,
    obs: &Observation,
    noise: &ExplorationNoise,
    rng: &mut R,
) -> Result<Action> {
    let a = actor_forward(actor, obs)?;
    let zv: f64 = rng.sample(StandardNormal);
    let zw: f64 = rng.sample(StandardNormal);
    Ok(Action::new(a.v + noise.sigma_v * zv, a.omega + noise.sigma_omega * zw).clamped())
}

/// `y_i = r_i + γ·(1 − terminal_i)·Q′(s_{i+1}, π′(s_{i+1}))`.
pub fn td_targets(
    batch: &[Transition],
    target_actor: &NetworkWeights<f32>,
    target_critic: &NetworkWeights<f32>,
    gamma: f64,
) -> Result<Vec<f32>> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param("gamma", format!("must lie in [0, 1), got {gamma}")));
    }
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = batch.len();
    let next: Vec<f32> = batch.iter().flat_map(|t| t.next_state).collect();
    let next_actions = actor_forward_batch(target_actor, &next, n)?;
    let q_next = critic_forward_batch(target_critic, &next, &next_actions, n)?;
    let g = gamma as f32;
    Ok(batch
        .iter()
        .zip(q_next)
        .map(|(t, q)| {
            if t.terminal {
                t.reward
            } else {
                t.reward + g * q
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TrainOutcome {
    Trained { critic_loss: f64, mean_q: f64 },
    Skipped { have: usize, need: usize },
}

/// Online and target networks of one learner with their optimizers.
#[derive(Clone, Debug)]
pub struct AgentNets {
    pub actor: NetworkWeights<f32>,
    pub critic: NetworkWeights<f32>,
    pub target_actor: NetworkWeights<f32>,
    pub target_critic: NetworkWeights<f32>,
    pub actor_opt: AdamState,
    pub critic_opt: AdamState,
}

impl AgentNets {
    pub fn new<R: Rng + ?Sized>(
        hidden: usize,
        actor_cfg: AdamConfig,
        critic_cfg: AdamConfig,
        rng: &mut R,
    ) -> Self {
        let actor = new_actor(hidden, rng);
        let critic = new_critic(hidden, rng);
        Self::from_networks(actor, critic, actor_cfg, critic_cfg)
    }

    pub fn from_networks(
        actor: NetworkWeights<f32>,
        critic: NetworkWeights<f32>,
        actor_cfg: AdamConfig,
        critic_cfg: AdamConfig,
    ) -> Self {
        Self {
            actor_opt: AdamState::new(actor_cfg, &actor),
            critic_opt: AdamState::new(critic_cfg, &critic),
            target_actor: actor.clone(),
            target_critic: critic.clone(),
            actor,
            critic,
        }
    }

    /// Hard copy of the online networks into the targets.
    pub fn target_sync(&mut self) {
        self.target_actor.clone_from(&self.actor);
        self.target_critic.clone_from(&self.critic);
    }

    /// Sample, build TD targets, descend the critic loss, then ascend the
    /// actor objective against the freshly updated critic.
    pub fn train_step<R: Rng + ?Sized>(
        &mut self,
        buffer: &ReplayBuffer,
        batch_size: usize,
        gamma: f64,
        rng: &mut R,
    ) -> Result<TrainOutcome> {
        if buffer.len() < batch_size {
            return Ok(TrainOutcome::Skipped {
                have: buffer.len(),
                need: batch_size,
            });
        }
        let batch = buffer.sample(batch_size, rng)?;
        self.train_on_batch(&batch, gamma)
    }

    pub fn train_on_batch(&mut self, batch: &[Transition], gamma: f64) -> Result<TrainOutcome> {
        let n = batch.len();
        let targets = td_targets(batch, &self.target_actor, &self.target_critic, gamma)?;
        let mut states = Vec::with_capacity(n * OBS_DIM);
        let mut actions = Vec::with_capacity(n * ACTION_DIM);
        for t in batch {
            states.extend_from_slice(&t.state);
            actions.extend_from_slice(&t.action);
        }
        let (critic_grads, loss, q) = critic_regression(&self.critic, &states, &actions, &targets, n)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite("critic loss"));
        }
        adam_step(&mut self.critic, &critic_grads, &mut self.critic_opt, Direction::Minimize)?;
        let actor_grads = backprop_actor(&self.actor, &self.critic, &states, n)?;
        adam_step(&mut self.actor, &actor_grads, &mut self.actor_opt, Direction::Maximize)?;
        let mean_q = q.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
        Ok(TrainOutcome::Trained {
            critic_loss: loss as f64,
            mean_q,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{critic_forward_batch, AdamConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn agent(seed: u64, actor_lr: f64) -> AgentNets {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        AgentNets::new(
            8,
            AdamConfig::with_learning_rate(actor_lr),
            AdamConfig::with_learning_rate(1e-3),
            &mut rng,
        )
    }

    fn random_transition(rng: &mut ChaCha8Rng, terminal: bool) -> Transition {
        let mut state = [0f32; OBS_DIM];
        let mut next_state = [0f32; OBS_DIM];
        for v in state.iter_mut().chain(next_state.iter_mut()) {
            *v = rng.random_range(0.0..1.0);
        }
        Transition {
            state,
            action: [rng.random_range(0.0..0.25), rng.random_range(-1.5..1.5)],
            reward: rng.random_range(-1.0..1.0),
            next_state,
            terminal,
        }
    }

    #[test]
    fn targets_follow_the_bootstrap_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let nets = agent(1, 1e-4);
        let batch: Vec<Transition> = (0..4).map(|i| random_transition(&mut rng, i == 2)).collect();
        let y = td_targets(&batch, &nets.target_actor, &nets.target_critic, 0.99).unwrap();
        let next: Vec<f32> = batch.iter().flat_map(|t| t.next_state).collect();
        let a = actor_forward_batch(&nets.target_actor, &next, 4).unwrap();
        let q = critic_forward_batch(&nets.target_critic, &next, &a, 4).unwrap();
        for i in 0..4 {
            let expected = if i == 2 { batch[i].reward } else { batch[i].reward + 0.99 * q[i] };
            assert_eq!(y[i], expected);
        }
        let myopic = td_targets(&batch, &nets.target_actor, &nets.target_critic, 0.0).unwrap();
        for (yi, t) in myopic.iter().zip(&batch) {
            assert_eq!(*yi, t.reward);
        }
        assert!(td_targets(&batch, &nets.target_actor, &nets.target_critic, 1.0).is_err());
    }

    #[test]
    fn bootstrap_arithmetic() {
        // r = 1, γ = 0.99, Q′ = 2 → 2.98; forced through a critic whose
        // output is its bias alone.
        let mut nets = agent(2, 1e-4);
        for p in nets.target_critic.params_mut() {
            *p = 0.0;
        }
        nets.target_critic.layer_mut(2).1[0] = 2.0;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut t = random_transition(&mut rng, false);
        t.reward = 1.0;
        let y = td_targets(&[t], &nets.target_actor, &nets.target_critic, 0.99).unwrap();
        assert!((y[0] - 2.98).abs() < 1e-6);
        t.reward = 100.0;
        t.terminal = true;
        let y = td_targets(&[t], &nets.target_actor, &nets.target_critic, 0.99).unwrap();
        assert_eq!(y[0], 100.0);
    }

    #[test]
    fn exploration_contracts() {
        let nets = agent(4, 1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let obs = Observation {
            d: 1.0,
            theta_d: 0.3,
            s_laser: [0.2; 24],
        };
        let greedy = actor_forward(&nets.actor, &obs).unwrap();
        let a = act_with_exploration(&nets.actor, &obs, &ExplorationNoise::none(), &mut rng).unwrap();
        assert_eq!(a, greedy);
        let wild = ExplorationNoise {
            sigma_v: 10.0,
            sigma_omega: 10.0,
        };
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50)
                .map(|_| act_with_exploration(&nets.actor, &obs, &wild, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        let a = draw(9);
        assert!(a.iter().all(|x| x.within_limits()));
        assert_eq!(a, draw(9));
    }

    #[test]
    fn target_sync_is_a_copy() {
        let mut nets = agent(5, 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut buf = ReplayBuffer::new(100).unwrap();
        for _ in 0..64 {
            buf.push(random_transition(&mut rng, false));
        }
        for _ in 0..5 {
            nets.train_step(&buf, 16, 0.9, &mut rng).unwrap();
        }
        assert_ne!(nets.actor, nets.target_actor);
        nets.target_sync();
        assert_eq!(nets.actor, nets.target_actor);
        assert_eq!(nets.critic, nets.target_critic);
        let snapshot = nets.clone();
        nets.target_sync();
        assert_eq!(nets.target_actor, snapshot.target_actor);

        let batch = buf.sample(8, &mut rng).unwrap();
        let with_targets = td_targets(&batch, &nets.target_actor, &nets.target_critic, 0.9).unwrap();
        let with_online = td_targets(&batch, &nets.actor, &nets.critic, 0.9).unwrap();
        assert_eq!(with_targets, with_online);
    }

    #[test]
    fn train_step_skips_small_buffers_and_freezes_actor_at_zero_lr() {
        let mut nets = agent(7, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut buf = ReplayBuffer::new(100).unwrap();
        buf.push(random_transition(&mut rng, false));
        assert_eq!(
            nets.train_step(&buf, 4, 0.9, &mut rng).unwrap(),
            TrainOutcome::Skipped { have: 1, need: 4 }
        );
        for _ in 0..20 {
            buf.push(random_transition(&mut rng, false));
        }
        let actor = nets.actor.clone();
        let critic = nets.critic.clone();
        for _ in 0..10 {
            nets.train_step(&buf, 4, 0.9, &mut rng).unwrap();
        }
        assert_eq!(nets.actor, actor);
        assert_ne!(nets.critic, critic);
    }

    #[test]
    fn loss_trends_down_on_a_fixed_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut nets = agent(11, 1e-4);
        let batch: Vec<Transition> = (0..32).map(|_| random_transition(&mut rng, true)).collect();
        let losses: Vec<f64> = (0..200)
            .map(|_| match nets.train_on_batch(&batch, 0.9).unwrap() {
                TrainOutcome::Trained { critic_loss, .. } => critic_loss,
                TrainOutcome::Skipped { .. } => unreachable!(),
            })
            .collect();
        for w in losses.windows(50).step_by(50) {
            assert!(w[49] < w[0], "{} !< {}", w[49], w[0]);
        }
    }

    #[test]
    fn identical_seeds_give_identical_loss_traces() {
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(12);
            let mut nets = agent(13, 1e-4);
            let mut buf = ReplayBuffer::new(500).unwrap();
            let mut trace = Vec::new();
            for _ in 0..100 {
                buf.push(random_transition(&mut rng, false));
                trace.push(nets.train_step(&buf, 16, 0.99, &mut rng).unwrap());
            }
            (trace, nets.actor)
        };
        assert_eq!(run(), run());
    }
}
