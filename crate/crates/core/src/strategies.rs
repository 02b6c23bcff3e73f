//! Multi-robot training orchestration.
//!
//! | strategy | memory | networks |
//! |----------|--------|----------|
//! | IDDPG    | local  | local    |
//! | SNDDPG   | shared | shared   |
//! | SEDDPG   | shared | local    |
//! | FLDDPG   | local  | federated|
//!
//! Every robot acts in its own arena. Cross-agent work (buffer merges,
//! server training, weight averaging) happens at episode boundaries in agent
//! order, so a run is a pure function of its configuration and seed.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arena::{ArenaSpec, Env, EpisodeStatus, Rect, RewardParams, DEFAULT_DT};
use crate::ddpg::{act_with_exploration, AgentNets, ExplorationNoise, ReplayBuffer, TrainOutcome, Transition};
use crate::error::{Error, Result};
use crate::ledger::{CommBudget, CommEvent, CommLedger, Peer, TransferKind};
use crate::nn::{fedavg, soft_blend, AdamConfig, NetworkWeights};
use crate::rng::{stream_rng, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Iddpg,
    Snddpg,
    Seddpg,
    Flddpg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemoryTopology {
    Local,
    Shared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetworkTopology {
    Local,
    Shared,
    Federated,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Iddpg,
        StrategyKind::Snddpg,
        StrategyKind::Seddpg,
        StrategyKind::Flddpg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Iddpg => "iddpg",
            StrategyKind::Snddpg => "snddpg",
            StrategyKind::Seddpg => "seddpg",
            StrategyKind::Flddpg => "flddpg",
        }
    }

    pub fn memory_topology(self) -> MemoryTopology {
        match self {
            StrategyKind::Iddpg | StrategyKind::Flddpg => MemoryTopology::Local,
            StrategyKind::Snddpg | StrategyKind::Seddpg => MemoryTopology::Shared,
        }
    }

    pub fn network_topology(self) -> NetworkTopology {
        match self {
            StrategyKind::Iddpg | StrategyKind::Seddpg => NetworkTopology::Local,
            StrategyKind::Snddpg => NetworkTopology::Shared,
            StrategyKind::Flddpg => NetworkTopology::Federated,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param("strategy", format!("unknown strategy `{s}`")))
    }
}

/// Four 4 m × 4 m layouts, one per robot, cycled for larger swarms.
pub fn default_arenas(robots: usize) -> Vec<ArenaSpec> {
    let layouts = [
        vec![Rect::new(1.7, 1.7, 2.3, 2.3)],
        vec![Rect::new(0.8, 2.4, 1.6, 3.0), Rect::new(2.4, 1.0, 3.2, 1.6)],
        vec![Rect::new(1.0, 1.0, 1.3, 3.0), Rect::new(2.7, 1.0, 3.0, 3.0)],
        vec![
            Rect::new(1.0, 1.0, 1.4, 1.4),
            Rect::new(2.6, 1.0, 3.0, 1.4),
            Rect::new(1.0, 2.6, 1.4, 3.0),
            Rect::new(2.6, 2.6, 3.0, 3.0),
        ],
    ];
    (0..robots)
        .map(|i| ArenaSpec::open(4.0, 4.0).with_obstacles(layouts[i % layouts.len()].clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainerConfig {
    /// Episodes per run (M).
    pub episodes: usize,
    /// Environment steps per episode (T).
    pub steps_per_episode: usize,
    /// Robots in the swarm (N).
    pub robots: usize,
    pub gamma: f64,
    /// Soft weight update factor; 0 is a hard FedAvg replacement.
    pub tau: f64,
    /// Episodes between federated rounds (T_wa).
    pub fed_period: usize,
    pub seddpg_sync_period: usize,
    pub snddpg_sync_period: usize,
    /// Minibatch size (l).
    pub batch_size: usize,
    pub train_every: usize,
    pub target_every: usize,
    pub buffer_capacity: usize,
    pub hidden: usize,
    pub actor_optimizer: AdamConfig,
    pub critic_optimizer: AdamConfig,
    pub exploration: ExplorationNoise,
    pub reward: RewardParams,
    pub dt: f64,
    /// One arena per robot; empty cycles the built-in layouts.
    pub arenas: Vec<ArenaSpec>,
    pub seed: u64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            episodes: 120,
            steps_per_episode: 1024,
            robots: 4,
            gamma: 0.99,
            tau: 0.5,
            fed_period: 1,
            seddpg_sync_period: 5,
            snddpg_sync_period: 3,
            batch_size: 128,
            train_every: 1,
            target_every: 128,
            buffer_capacity: 100_000,
            hidden: 512,
            actor_optimizer: AdamConfig::with_learning_rate(1e-4),
            critic_optimizer: AdamConfig::with_learning_rate(1e-3),
            exploration: ExplorationNoise::default(),
            reward: RewardParams::default(),
            dt: DEFAULT_DT,
            arenas: Vec::new(),
            seed: 0,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("episodes", self.episodes),
            ("steps_per_episode", self.steps_per_episode),
            ("robots", self.robots),
            ("fed_period", self.fed_period),
            ("seddpg_sync_period", self.seddpg_sync_period),
            ("snddpg_sync_period", self.snddpg_sync_period),
            ("batch_size", self.batch_size),
            ("train_every", self.train_every),
            ("target_every", self.target_every),
            ("buffer_capacity", self.buffer_capacity),
            ("hidden", self.hidden),
        ] {
            if v == 0 {
                return Err(Error::param(name, "must be at least 1"));
            }
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::param("tau", format!("must lie in [0, 1], got {}", self.tau)));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::param("gamma", format!("must lie in [0, 1), got {}", self.gamma)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param("dt", "must be positive"));
        }
        for (name, opt) in [
            ("actor_optimizer", &self.actor_optimizer),
            ("critic_optimizer", &self.critic_optimizer),
        ] {
            if !(opt.learning_rate >= 0.0
                && (0.0..1.0).contains(&opt.beta1)
                && (0.0..1.0).contains(&opt.beta2)
                && opt.epsilon > 0.0)
            {
                return Err(Error::param(name, "needs lr ≥ 0, betas in [0, 1), epsilon > 0"));
            }
        }
        if self.exploration.sigma_v < 0.0 || self.exploration.sigma_omega < 0.0 {
            return Err(Error::param("exploration", "standard deviations must be non-negative"));
        }
        if !self.arenas.is_empty() && self.arenas.len() != self.robots {
            return Err(Error::param(
                "arenas",
                format!("{} arena specs for {} robots", self.arenas.len(), self.robots),
            ));
        }
        for (i, a) in self.resolved_arenas().iter().enumerate() {
            a.validate()
                .map_err(|e| Error::param(format!("arenas[{i}]"), e.to_string()))?;
        }
        Ok(())
    }

    pub fn resolved_arenas(&self) -> Vec<ArenaSpec> {
        if self.arenas.is_empty() {
            default_arenas(self.robots)
        } else {
            self.arenas.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TrainingEvent {
    FederatedRound {
        episode: usize,
        tau: f64,
    },
    ExperienceSync {
        episode: usize,
        merged_transitions: usize,
        shared_size: usize,
    },
    NetworkSync {
        episode: usize,
        uploaded_transitions: usize,
        server_train_steps: usize,
    },
    TrainSkipped {
        episode: usize,
        learner: Peer,
        steps: usize,
    },
}

/// Everything a run produces. Weights travel separately as checkpoints.
#[derive(Clone, Debug, Serialize)]
pub struct TrainingRecord {
    pub strategy: StrategyKind,
    pub seed: u64,
    pub episodes: usize,
    pub robots: usize,
    /// Reward sums, `[episode][agent]`.
    pub rewards: Vec<Vec<f64>>,
    pub goals: Vec<Vec<u32>>,
    pub collisions: Vec<Vec<u32>>,
    pub ledger: CommLedger,
    pub events: Vec<TrainingEvent>,
    pub interpretations: Vec<String>,
    #[serde(skip)]
    pub actors: Vec<NetworkWeights<f32>>,
    #[serde(skip)]
    pub critics: Vec<NetworkWeights<f32>>,
}

impl TrainingRecord {
    pub fn agent_curve(&self, agent: usize) -> Vec<f64> {
        self.rewards.iter().map(|row| row[agent]).collect()
    }
}

/// Blends every network toward the set's elementwise mean:
/// `θ_i ← τ·θ_i + (1 − τ)·mean(θ)`.
pub fn blend_toward_mean(nets: &mut [&mut NetworkWeights<f32>], tau: f64) -> Result<()> {
    let avg = {
        let refs: Vec<&NetworkWeights<f32>> = nets.iter().map(|n| &**n).collect();
        fedavg(&refs)?
    };
    let blended = nets
        .iter()
        .map(|n| soft_blend(n, &avg, tau))
        .collect::<Result<Vec<_>>>()?;
    for (n, b) in nets.iter_mut().zip(blended) {
        **n = b;
    }
    Ok(())
}

/// Averages actors and critics independently and soft-blends every agent
/// toward the averages. Target networks and optimizer state stay local.
pub fn federated_round(agents: &mut [AgentNets], tau: f64) -> Result<()> {
    let mut actors: Vec<&mut NetworkWeights<f32>> = agents.iter_mut().map(|a| &mut a.actor).collect();
    blend_toward_mean(&mut actors, tau)?;
    let mut critics: Vec<&mut NetworkWeights<f32>> = agents.iter_mut().map(|a| &mut a.critic).collect();
    blend_toward_mean(&mut critics, tau)
}

#[allow(clippy::large_enum_variant)]
enum Learners {
    /// IDDPG and FLDDPG.
    Independent {
        nets: Vec<AgentNets>,
        buffers: Vec<ReplayBuffer>,
    },
    SharedExperience {
        nets: Vec<AgentNets>,
        views: Vec<ReplayBuffer>,
        pending: Vec<Vec<Transition>>,
        shared: ReplayBuffer,
    },
    SharedNetwork {
        server: AgentNets,
        policy: NetworkWeights<f32>,
        pending: Vec<Vec<Transition>>,
        buffer: ReplayBuffer,
        rng: ChaCha8Rng,
        owed_steps: usize,
    },
}

impl Learners {
    fn acting_actor(&self, agent: usize) -> &NetworkWeights<f32> {
        match self {
            Learners::Independent { nets, .. } | Learners::SharedExperience { nets, .. } => &nets[agent].actor,
            Learners::SharedNetwork { policy, .. } => policy,
        }
    }
}

/// Step-by-step driver for one (strategy, configuration, seed) run.
pub struct SwarmTrainer {
    kind: StrategyKind,
    cfg: TrainerConfig,
    budget: CommBudget,
    envs: Vec<Env>,
    explore_rngs: Vec<ChaCha8Rng>,
    sample_rngs: Vec<ChaCha8Rng>,
    learners: Learners,
    ledger: CommLedger,
    events: Vec<TrainingEvent>,
    rewards: Vec<Vec<f64>>,
    goals: Vec<Vec<u32>>,
    collisions: Vec<Vec<u32>>,
    episodes_done: usize,
}

impl SwarmTrainer {
    pub fn new(kind: StrategyKind, cfg: &TrainerConfig, budget: &CommBudget) -> Result<Self> {
        cfg.validate()?;
        budget.validate()?;
        let n = cfg.robots;
        let arenas = cfg.resolved_arenas();
        let envs = (0..n)
            .map(|i| {
                Env::new(
                    arenas[i].clone(),
                    cfg.reward,
                    cfg.dt,
                    cfg.steps_per_episode,
                    stream_rng(cfg.seed, i, Stream::Env),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let make_nets = |i: usize| {
            AgentNets::new(
                cfg.hidden,
                cfg.actor_optimizer,
                cfg.critic_optimizer,
                &mut stream_rng(cfg.seed, i, Stream::Init),
            )
        };
        let buffer = || ReplayBuffer::new(cfg.buffer_capacity);
        let learners = match kind {
            StrategyKind::Iddpg | StrategyKind::Flddpg => Learners::Independent {
                nets: (0..n).map(make_nets).collect(),
                buffers: (0..n).map(|_| buffer()).collect::<Result<_>>()?,
            },
            StrategyKind::Seddpg => Learners::SharedExperience {
                nets: (0..n).map(make_nets).collect(),
                views: (0..n).map(|_| buffer()).collect::<Result<_>>()?,
                pending: vec![Vec::new(); n],
                shared: buffer()?,
            },
            StrategyKind::Snddpg => {
                let server = make_nets(0);
                Learners::SharedNetwork {
                    policy: server.actor.clone(),
                    server,
                    pending: vec![Vec::new(); n],
                    buffer: buffer()?,
                    rng: stream_rng(cfg.seed, 0, Stream::Server),
                    owed_steps: 0,
                }
            }
        };
        Ok(Self {
            kind,
            budget: *budget,
            envs,
            explore_rngs: (0..n).map(|i| stream_rng(cfg.seed, i, Stream::Exploration)).collect(),
            sample_rngs: (0..n).map(|i| stream_rng(cfg.seed, i, Stream::Sampling)).collect(),
            learners,
            ledger: CommLedger::with_budget(budget.total_budget),
            events: Vec::new(),
            rewards: Vec::new(),
            goals: Vec::new(),
            collisions: Vec::new(),
            episodes_done: 0,
            cfg: cfg.clone(),
        })
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn ledger(&self) -> &CommLedger {
        &self.ledger
    }

    /// The actor agent `i` currently acts with.
    pub fn acting_actor(&self, agent: usize) -> &NetworkWeights<f32> {
        self.learners.acting_actor(agent)
    }

    /// The replay memory agent `i` trains from (the server's for SNDDPG).
    pub fn training_buffer(&self, agent: usize) -> &ReplayBuffer {
        match &self.learners {
            Learners::Independent { buffers, .. } => &buffers[agent],
            Learners::SharedExperience { views, .. } => &views[agent],
            Learners::SharedNetwork { buffer, .. } => buffer,
        }
    }

    /// Runs one episode of `T` steps for every robot and then performs the
    /// strategy's episode-boundary synchronization. Returns the per-agent
    /// reward sums.
    pub fn run_episode(&mut self) -> Result<Vec<f64>> {
        let episode = self.episodes_done + 1;
        let n = self.cfg.robots;
        let mut rewards = vec![0.0; n];
        let mut goals = vec![0u32; n];
        let mut collisions = vec![0u32; n];
        let mut skipped = vec![0usize; n];
        for env in &mut self.envs {
            env.reset()?;
        }
        for t in 1..=self.cfg.steps_per_episode {
            for i in 0..n {
                let obs = self.envs[i].observation();
                let action = act_with_exploration(
                    self.learners.acting_actor(i),
                    &obs,
                    &self.cfg.exploration,
                    &mut self.explore_rngs[i],
                )?;
                let out = self.envs[i].step(&action)?;
                let transition = Transition {
                    state: obs.features(),
                    action: [action.v as f32, action.omega as f32],
                    reward: out.reward.total as f32,
                    next_state: out.observation.features(),
                    terminal: out.status.is_terminal(),
                };
                self.store(i, transition);
                rewards[i] += out.reward.total;
                match out.status {
                    EpisodeStatus::GoalReached => goals[i] += 1,
                    EpisodeStatus::Collided => collisions[i] += 1,
                    _ => {}
                }
                if out.status.is_done() {
                    self.envs[i].reset()?;
                }
            }
            if t % self.cfg.train_every == 0 {
                self.train_all(&mut skipped)?;
            }
            if t % self.cfg.target_every == 0 {
                self.sync_targets();
            }
        }
        for (i, &steps) in skipped.iter().enumerate() {
            if steps > 0 {
                self.events.push(TrainingEvent::TrainSkipped {
                    episode,
                    learner: Peer::Agent(i),
                    steps,
                });
            }
        }
        self.end_episode(episode)?;
        self.rewards.push(rewards.clone());
        self.goals.push(goals);
        self.collisions.push(collisions);
        self.episodes_done = episode;
        Ok(rewards)
    }

    fn store(&mut self, agent: usize, t: Transition) {
        match &mut self.learners {
            Learners::Independent { buffers, .. } => buffers[agent].push(t),
            Learners::SharedExperience { views, pending, .. } => {
                views[agent].push(t);
                pending[agent].push(t);
            }
            Learners::SharedNetwork { pending, .. } => pending[agent].push(t),
        }
    }

    fn train_all(&mut self, skipped: &mut [usize]) -> Result<()> {
        let (batch, gamma) = (self.cfg.batch_size, self.cfg.gamma);
        match &mut self.learners {
            Learners::Independent { nets, buffers } => {
                for (i, (net, buf)) in nets.iter_mut().zip(buffers.iter()).enumerate() {
                    if let TrainOutcome::Skipped { .. } =
                        net.train_step(buf, batch, gamma, &mut self.sample_rngs[i])?
                    {
                        skipped[i] += 1;
                    }
                }
            }
            Learners::SharedExperience { nets, views, .. } => {
                for (i, (net, buf)) in nets.iter_mut().zip(views.iter()).enumerate() {
                    if let TrainOutcome::Skipped { .. } =
                        net.train_step(buf, batch, gamma, &mut self.sample_rngs[i])?
                    {
                        skipped[i] += 1;
                    }
                }
            }
            Learners::SharedNetwork { owed_steps, .. } => *owed_steps += 1,
        }
        Ok(())
    }

    fn sync_targets(&mut self) {
        match &mut self.learners {
            Learners::Independent { nets, .. } | Learners::SharedExperience { nets, .. } => {
                nets.iter_mut().for_each(AgentNets::target_sync)
            }
            // the server syncs its targets while replaying owed steps
            Learners::SharedNetwork { .. } => {}
        }
    }

    fn end_episode(&mut self, episode: usize) -> Result<()> {
        let cfg = &self.cfg;
        let budget = self.budget;
        match (&mut self.learners, self.kind) {
            (Learners::Independent { nets, .. }, StrategyKind::Flddpg) => {
                if episode.is_multiple_of(cfg.fed_period) {
                    self.ledger.try_record_cycle(&[
                        transfer(episode, TransferKind::ModelUp, budget.model_oneway),
                        transfer(episode, TransferKind::ModelDown, budget.model_oneway),
                    ])?;
                    federated_round(nets, cfg.tau)?;
                    self.events.push(TrainingEvent::FederatedRound {
                        episode,
                        tau: cfg.tau,
                    });
                }
            }
            (Learners::Independent { .. }, _) => {}
            (
                Learners::SharedExperience {
                    views,
                    pending,
                    shared,
                    ..
                },
                _,
            ) => {
                if episode.is_multiple_of(cfg.seddpg_sync_period) {
                    self.ledger.try_record_cycle(&[
                        transfer(episode, TransferKind::BufferUp, budget.buffer_oneway),
                        transfer(episode, TransferKind::BufferDown, budget.buffer_oneway),
                    ])?;
                    let mut merged = 0;
                    for local in pending.iter_mut() {
                        merged += local.len();
                        for t in local.drain(..) {
                            shared.push(t);
                        }
                    }
                    for view in views.iter_mut() {
                        view.clone_from(shared);
                    }
                    self.events.push(TrainingEvent::ExperienceSync {
                        episode,
                        merged_transitions: merged,
                        shared_size: shared.len(),
                    });
                }
            }
            (
                Learners::SharedNetwork {
                    server,
                    policy,
                    pending,
                    buffer,
                    rng,
                    owed_steps,
                },
                _,
            ) => {
                if episode.is_multiple_of(cfg.snddpg_sync_period) {
                    self.ledger.try_record_cycle(&[CommEvent {
                        episode,
                        agent: Peer::Broadcast,
                        kind: TransferKind::CombinedUpdate,
                        bytes: budget.snddpg_per_update,
                    }])?;
                    let mut uploaded = 0;
                    for local in pending.iter_mut() {
                        uploaded += local.len();
                        for t in local.drain(..) {
                            buffer.push(t);
                        }
                    }
                    let steps = std::mem::take(owed_steps);
                    let target_interval = (cfg.target_every / cfg.train_every).max(1);
                    let mut skipped = 0;
                    for s in 1..=steps {
                        if let TrainOutcome::Skipped { .. } =
                            server.train_step(buffer, cfg.batch_size, cfg.gamma, rng)?
                        {
                            skipped += 1;
                        }
                        if s % target_interval == 0 {
                            server.target_sync();
                        }
                    }
                    policy.clone_from(&server.actor);
                    self.events.push(TrainingEvent::NetworkSync {
                        episode,
                        uploaded_transitions: uploaded,
                        server_train_steps: steps,
                    });
                    if skipped > 0 {
                        self.events.push(TrainingEvent::TrainSkipped {
                            episode,
                            learner: Peer::Broadcast,
                            steps: skipped,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn finish(self) -> TrainingRecord {
        let n = self.cfg.robots;
        let (actors, critics) = match self.learners {
            Learners::Independent { nets, .. } | Learners::SharedExperience { nets, .. } => {
                nets.into_iter().map(|a| (a.actor, a.critic)).unzip()
            }
            Learners::SharedNetwork { server, policy, .. } => {
                (vec![policy; n], vec![server.critic; n])
            }
        };
        TrainingRecord {
            strategy: self.kind,
            seed: self.cfg.seed,
            episodes: self.episodes_done,
            robots: n,
            rewards: self.rewards,
            goals: self.goals,
            collisions: self.collisions,
            ledger: self.ledger,
            events: self.events,
            interpretations: interpretations(self.kind),
            actors,
            critics,
        }
    }
}

fn transfer(episode: usize, kind: TransferKind, bytes: u64) -> CommEvent {
    CommEvent {
        episode,
        agent: Peer::Broadcast,
        kind,
        bytes,
    }
}

fn interpretations(kind: StrategyKind) -> Vec<String> {
    let mut notes = vec![
        "td targets mask bootstrapping on goal and collision transitions".to_string(),
        "environments reset on goal or collision and collection continues to exactly T steps per episode".to_string(),
        "target networks are copied, not averaged, every target_every steps".to_string(),
    ];
    match kind {
        StrategyKind::Iddpg => notes.push("no transfers: every learner is isolated".into()),
        StrategyKind::Flddpg => notes.push(
            "federated rounds average actors and critics only; targets and optimizer state stay local".into(),
        ),
        StrategyKind::Seddpg => notes.push(
            "between syncs each agent trains on the last shared snapshot plus its own new transitions; syncs merge in agent order".into(),
        ),
        StrategyKind::Snddpg => notes.push(
            "agents act with the frozen broadcast actor between syncs; at sync the server replays one interval's worth of per-agent train steps".into(),
        ),
    }
    notes
}

/// Trains `kind` end to end under `budget`.
pub fn run_training(kind: StrategyKind, cfg: &TrainerConfig, budget: &CommBudget) -> Result<TrainingRecord> {
    let mut trainer = SwarmTrainer::new(kind, cfg, budget)?;
    for _ in 0..cfg.episodes {
        trainer.run_episode()?;
    }
    Ok(trainer.finish())
}
