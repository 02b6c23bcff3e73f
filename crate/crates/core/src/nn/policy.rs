//! Actor and critic networks for continuous (v, ω) control.
//!
//! The actor maps observations through two ReLU hidden layers to a raw pair
//! `(u_v, u_ω)`, squashed to `v = sigmoid(u_v)·0.25` and
//! `ω = tanh(u_ω)·π/2`. The critic embeds the observation with one ReLU
//! layer, concatenates the action, and applies a second ReLU layer before a
//! linear scalar output.

use rand::Rng;

use super::dense::{backward, forward};
use super::weights::{Activation, LayerSpec, NetworkWeights, Scalar, SideInput};
use crate::arena::{Action, Observation, ACTION_DIM, MAX_ANGULAR_VELOCITY, MAX_LINEAR_VELOCITY, OBS_DIM};
use crate::error::{Error, Result};

pub fn actor_layers(obs_dim: usize, hidden: usize) -> Vec<LayerSpec> {
    vec![
        LayerSpec::new(obs_dim, hidden, Activation::Relu),
        LayerSpec::new(hidden, hidden, Activation::Relu),
        LayerSpec::new(hidden, ACTION_DIM, Activation::Linear),
    ]
}

pub fn critic_layers(obs_dim: usize, hidden: usize) -> (Vec<LayerSpec>, SideInput) {
    (
        vec![
            LayerSpec::new(obs_dim, hidden, Activation::Relu),
            LayerSpec::new(hidden + ACTION_DIM, hidden, Activation::Relu),
            LayerSpec::new(hidden, 1, Activation::Linear),
        ],
        SideInput {
            layer: 1,
            width: ACTION_DIM,
        },
    )
}

pub fn new_actor<T: Scalar, R: Rng + ?Sized>(hidden: usize, rng: &mut R) -> NetworkWeights<T> {
    NetworkWeights::init_uniform(actor_layers(OBS_DIM, hidden), None, rng)
        .expect("actor topology is well formed")
}

pub fn new_critic<T: Scalar, R: Rng + ?Sized>(hidden: usize, rng: &mut R) -> NetworkWeights<T> {
    let (layers, side) = critic_layers(OBS_DIM, hidden);
    NetworkWeights::init_uniform(layers, Some(side), rng).expect("critic topology is well formed")
}

#[inline]
fn squash<T: Scalar>(u_v: T, u_w: T) -> (T, T) {
    let v_max = T::from_f64_lossy(MAX_LINEAR_VELOCITY);
    let w_max = T::from_f64_lossy(MAX_ANGULAR_VELOCITY);
    (
        Activation::Sigmoid.apply(u_v) * v_max,
        u_w.tanh() * w_max,
    )
}

/// d(v, ω)/d(u_v, u_ω) for the squashing head.
#[inline]
fn squash_derivative<T: Scalar>(u_v: T, u_w: T) -> (T, T) {
    let v_max = T::from_f64_lossy(MAX_LINEAR_VELOCITY);
    let w_max = T::from_f64_lossy(MAX_ANGULAR_VELOCITY);
    let s = Activation::Sigmoid.apply(u_v);
    let t = u_w.tanh();
    (v_max * s * (T::one() - s), w_max * (T::one() - t * t))
}

fn check_actor<T: Scalar>(actor: &NetworkWeights<T>) -> Result<()> {
    if actor.output_dim() != ACTION_DIM || actor.side_input().is_some() {
        return Err(Error::Shape(format!(
            "actor must emit {ACTION_DIM} raw values without side inputs"
        )));
    }
    Ok(())
}

fn check_critic<T: Scalar>(critic: &NetworkWeights<T>) -> Result<()> {
    match critic.side_input() {
        Some(s) if s.width == ACTION_DIM && critic.output_dim() == 1 => Ok(()),
        _ => Err(Error::Shape(
            "critic must take the action as a side input and emit one value".into(),
        )),
    }
}

/// Scaled actions for a batch of states, `batch × 2`.
pub fn actor_forward_batch<T: Scalar>(
    actor: &NetworkWeights<T>,
    states: &[T],
    batch: usize,
) -> Result<Vec<T>> {
    check_actor(actor)?;
    let trace = forward(actor, states, None, batch)?;
    Ok(trace
        .output()
        .chunks_exact(ACTION_DIM)
        .flat_map(|u| {
            let (v, w) = squash(u[0], u[1]);
            [v, w]
        })
        .collect())
}

pub fn actor_forward(actor: &NetworkWeights<f32>, obs: &Observation) -> Result<Action> {
    check_actor(actor)?;
    let trace = forward(actor, &obs.features(), None, 1)?;
    let u = trace.output();
    let (v, w) = squash(u[0] as f64, u[1] as f64);
    Ok(Action::new(v, w))
}

pub fn critic_forward_batch<T: Scalar>(
    critic: &NetworkWeights<T>,
    states: &[T],
    actions: &[T],
    batch: usize,
) -> Result<Vec<T>> {
    check_critic(critic)?;
    Ok(forward(critic, states, Some(actions), batch)?.output().to_vec())
}

pub fn critic_forward(critic: &NetworkWeights<f32>, obs: &Observation, action: &Action) -> Result<f64> {
    let a = [action.v as f32, action.omega as f32];
    Ok(critic_forward_batch(critic, &obs.features(), &a, 1)?[0] as f64)
}

/// Mean squared TD error `L = (1/B) Σ (y_i − Q(s_i, a_i))²` and its exact
/// gradient with respect to every critic parameter.
pub fn backprop_critic<T: Scalar>(
    critic: &NetworkWeights<T>,
    states: &[T],
    actions: &[T],
    targets: &[T],
    batch: usize,
) -> Result<(NetworkWeights<T>, T)> {
    critic_regression(critic, states, actions, targets, batch).map(|(g, loss, _)| (g, loss))
}

/// [`backprop_critic`] that also hands back the pre-update Q values.
pub(crate) fn critic_regression<T: Scalar>(
    critic: &NetworkWeights<T>,
    states: &[T],
    actions: &[T],
    targets: &[T],
    batch: usize,
) -> Result<(NetworkWeights<T>, T, Vec<T>)> {
    check_critic(critic)?;
    if batch == 0 {
        return Err(Error::EmptyBatch);
    }
    if targets.len() != batch {
        return Err(Error::Shape(format!(
            "{} targets for a batch of {batch}",
            targets.len()
        )));
    }
    let trace = forward(critic, states, Some(actions), batch)?;
    let q = trace.output();
    let scale = T::from_f64_lossy(1.0 / batch as f64);
    let two = T::from_f64_lossy(2.0);
    let mut loss = T::zero();
    let mut grad_q = Vec::with_capacity(batch);
    for (qi, yi) in q.iter().zip(targets) {
        let err = *qi - *yi;
        loss = loss + err * err;
        grad_q.push(two * err * scale);
    }
    let mut grads = critic.zeros_like();
    backward(critic, &trace, &grad_q, Some(&mut grads));
    Ok((grads, loss * scale, q.to_vec()))
}

/// Gradient of `J = (1/B) Σ Q(s_i, π(s_i))` with respect to the actor's
/// parameters (the ascent direction), chaining ∂Q/∂a through the squashing
/// head and the actor body.
pub fn backprop_actor<T: Scalar>(
    actor: &NetworkWeights<T>,
    critic: &NetworkWeights<T>,
    states: &[T],
    batch: usize,
) -> Result<NetworkWeights<T>> {
    check_actor(actor)?;
    check_critic(critic)?;
    if batch == 0 {
        return Err(Error::EmptyBatch);
    }
    let actor_trace = forward(actor, states, None, batch)?;
    let raw = actor_trace.output();
    let mut actions = Vec::with_capacity(batch * ACTION_DIM);
    for u in raw.chunks_exact(ACTION_DIM) {
        let (v, w) = squash(u[0], u[1]);
        actions.push(v);
        actions.push(w);
    }
    let critic_trace = forward(critic, states, Some(&actions), batch)?;
    let dj_dq = vec![T::from_f64_lossy(1.0 / batch as f64); batch];
    let dj_da = backward(critic, &critic_trace, &dj_dq, None)
        .side
        .expect("critic has a side input");
    let mut dj_du = Vec::with_capacity(batch * ACTION_DIM);
    for (u, da) in raw.chunks_exact(ACTION_DIM).zip(dj_da.chunks_exact(ACTION_DIM)) {
        let (dv, dw) = squash_derivative(u[0], u[1]);
        dj_du.push(da[0] * dv);
        dj_du.push(da[1] * dw);
    }
    let mut grads = actor.zeros_like();
    backward(actor, &actor_trace, &dj_du, Some(&mut grads));
    Ok(grads)
}
