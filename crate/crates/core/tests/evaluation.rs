use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fedswarm::arena::{Action, ArenaSpec, Observation, Rect, RewardParams, MAX_ANGULAR_VELOCITY};
use fedswarm::ledger::CommLedger;
use fedswarm::metrics::{
    average_reward_curve, count_failed_agents, evaluate, evaluate_policy, evaluate_policy_logged, replay_run,
    EvalSpec,
};
use fedswarm::nn::new_actor;
use fedswarm::strategies::{StrategyKind, TrainingRecord};

const DT: f64 = 0.1;

fn record(rewards: Vec<Vec<f64>>) -> TrainingRecord {
    let robots = rewards[0].len();
    TrainingRecord {
        strategy: StrategyKind::Iddpg,
        seed: 0,
        episodes: rewards.len(),
        robots,
        goals: vec![vec![0; robots]; rewards.len()],
        collisions: vec![vec![0; robots]; rewards.len()],
        rewards,
        ledger: CommLedger::new(),
        events: Vec::new(),
        interpretations: Vec::new(),
        actors: Vec::new(),
        critics: Vec::new(),
    }
}

/// Turn in place toward the goal, then drive straight at it.
fn homing(obs: &Observation) -> fedswarm::Result<Action> {
    let omega = (obs.theta_d / DT).clamp(-MAX_ANGULAR_VELOCITY, MAX_ANGULAR_VELOCITY);
    let v = if obs.theta_d.abs() < 1e-3 { 0.25 } else { 0.0 };
    Ok(Action::new(v, omega))
}

#[test]
fn average_curve_examples() {
    let single = record(vec![vec![1.5], vec![-2.0], vec![7.25]]);
    assert_eq!(average_reward_curve(&single), vec![1.5, -2.0, 7.25]);
    let constant = record(vec![vec![1.0, 2.0, 3.0, 4.0]; 6]);
    assert_eq!(average_reward_curve(&constant), vec![2.5; 6]);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rewards: Vec<Vec<f64>> = (0..40)
        .map(|_| (0..4).map(|_| rng.random_range(-500.0..200.0)).collect())
        .collect();
    let r = record(rewards.clone());
    let curve = average_reward_curve(&r);
    for m in 0..rewards.len() {
        let mut sum = 0.0;
        for r in &rewards[m] {
            sum += r;
        }
        assert_eq!(curve[m], sum / 4.0);
    }
}

#[test]
fn failed_agents_are_counted_per_agent() {
    let r = record(vec![
        vec![0.5, -300.0, 0.0],
        vec![0.5, -100.0, 1.4],
        vec![0.5, 20.0, 0.0],
    ]);
    assert_eq!(count_failed_agents(&r), 2);
}

#[test]
fn immobile_actor_never_succeeds() {
    let arena = ArenaSpec::open(4.0, 4.0);
    let spec = EvalSpec { runs: 5, time_limit: 10.0 };
    let r = evaluate_policy(|_| Ok(Action::new(0.0, 0.0)), &arena, &RewardParams::default(), DT, &spec, 3).unwrap();
    assert_eq!((r.success_rate, r.completion_time, r.successes), (0.0, None, 0));
}

#[test]
fn homing_controller_always_arrives_in_open_space() {
    let arena = ArenaSpec::open(5.0, 5.0);
    let spec = EvalSpec::default();
    let r = evaluate_policy(homing, &arena, &RewardParams::default(), DT, &spec, 11).unwrap();
    assert_eq!(r.success_rate, 1.0);
    assert_eq!(r.runs, 20);
    let t = r.completion_time.unwrap();
    assert!(t > 0.0 && t < spec.time_limit, "{t}");
}

#[test]
fn evaluation_is_deterministic() {
    let arena = ArenaSpec::open(4.0, 4.0).with_obstacles(vec![Rect::new(1.5, 1.5, 2.5, 2.5)]);
    let actor = new_actor(16, &mut ChaCha8Rng::seed_from_u64(2));
    let spec = EvalSpec { runs: 6, time_limit: 20.0 };
    let a = evaluate(&actor, &arena, &RewardParams::default(), DT, &spec, 5).unwrap();
    let b = evaluate(&actor, &arena, &RewardParams::default(), DT, &spec, 5).unwrap();
    assert_eq!(a, b);
    assert!(evaluate(&actor, &arena, &RewardParams::default(), DT, &EvalSpec { runs: 0, time_limit: 1.0 }, 5).is_err());
}

#[test]
fn success_rate_matches_replayed_trajectories() {
    let arena = ArenaSpec::open(5.0, 5.0).with_obstacles(vec![Rect::new(2.0, 2.0, 3.0, 3.0)]);
    let spec = EvalSpec { runs: 20, time_limit: 30.0 };
    let (result, runs) = evaluate_policy_logged(homing, &arena, &RewardParams::default(), DT, &spec, 21).unwrap();
    // the central block makes some straight-line runs collide
    assert!(result.successes > 0 && result.successes < 20, "{}", result.successes);
    let mut replayed = 0;
    for run in &runs {
        let status = replay_run(run, &arena, &RewardParams::default(), DT).unwrap();
        assert_eq!(status, run.status);
        replayed += run.succeeded() as usize;
    }
    assert_eq!(replayed, result.successes);
    assert_eq!(result.success_rate, replayed as f64 / 20.0);
}
