use serde::{Deserialize, Serialize};

use super::weights::NetworkWeights;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamConfig {
    pub fn with_learning_rate(learning_rate: f64) -> Self {
        Self {
            learning_rate,
            ..Self::default()
        }
    }
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    first_moment: Vec<f32>,
    second_moment: Vec<f32>,
    step: u64,
}

impl AdamState {
    pub fn new(config: AdamConfig, weights: &NetworkWeights<f32>) -> Self {
        Self {
            config,
            first_moment: vec![0.0; weights.param_count()],
            second_moment: vec![0.0; weights.param_count()],
            step: 0,
        }
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn moments(&self) -> (&[f32], &[f32]) {
        (&self.first_moment, &self.second_moment)
    }
}

/// One bias-corrected Adam update. `Maximize` ascends along `grads`.
///
/// Gradients are checked before anything is touched; a non-finite result
/// aborts with an error and leaves the weights unusable.
pub fn adam_step(
    weights: &mut NetworkWeights<f32>,
    grads: &NetworkWeights<f32>,
    state: &mut AdamState,
    direction: Direction,
) -> Result<()> {
    weights.check_same_shape(grads)?;
    if state.first_moment.len() != weights.param_count() {
        return Err(Error::Shape("optimizer state does not match the weights".into()));
    }
    if !grads.all_finite() {
        return Err(Error::NonFinite("gradients"));
    }
    state.step += 1;
    let c = state.config;
    let t = state.step as f64;
    let bias1 = (1.0 - c.beta1.powf(t)) as f32;
    let bias2 = (1.0 - c.beta2.powf(t)) as f32;
    let (b1, b2) = (c.beta1 as f32, c.beta2 as f32);
    let lr = c.learning_rate as f32;
    let eps = c.epsilon as f32;
    let sign = match direction {
        Direction::Minimize => 1.0f32,
        Direction::Maximize => -1.0f32,
    };
    let mut finite = true;
    for (((p, g), m), v) in weights
        .params_mut()
        .iter_mut()
        .zip(grads.params())
        .zip(state.first_moment.iter_mut())
        .zip(state.second_moment.iter_mut())
    {
        let g = sign * *g;
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / bias1;
        let v_hat = *v / bias2;
        *p -= lr * m_hat / (v_hat.sqrt() + eps);
        finite &= p.is_finite();
    }
    if finite {
        Ok(())
    } else {
        Err(Error::NonFinite("weights after optimizer step"))
    }
}
