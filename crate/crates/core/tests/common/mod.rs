#![allow(dead_code)]

use fedswarm::arena::{ArenaSpec, Pose, Rect, BEAM_COUNT, MAX_ANGULAR_VELOCITY, MAX_LINEAR_VELOCITY, OBS_DIM};
use fedswarm::nn::{Activation, NetworkWeights};
use rand::Rng;

/// Plain nested-loop forward pass. Returns the outputs and the on/off
/// pattern of every ReLU unit, row by row.
pub fn forward_oracle(net: &NetworkWeights<f64>, input: &[f64], side: Option<&[f64]>) -> (Vec<f64>, Vec<bool>) {
    let mut x = input.to_vec();
    let mut pattern = Vec::new();
    for (k, spec) in net.layers().iter().enumerate() {
        if let Some(s) = net.side_input() {
            if s.layer == k {
                x.extend_from_slice(side.expect("side input required"));
            }
        }
        assert_eq!(x.len(), spec.input_dim);
        let w = net.weights(k);
        let b = net.bias(k);
        let mut y = Vec::with_capacity(spec.output_dim);
        for o in 0..spec.output_dim {
            let mut z = b[o];
            for j in 0..spec.input_dim {
                z += w[o * spec.input_dim + j] * x[j];
            }
            y.push(match spec.activation {
                Activation::Relu => {
                    pattern.push(z > 0.0);
                    z.max(0.0)
                }
                Activation::Linear => z,
                Activation::Tanh => z.tanh(),
                Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            });
        }
        x = y;
    }
    (x, pattern)
}

pub fn squash_oracle(u_v: f64, u_w: f64) -> (f64, f64) {
    (
        MAX_LINEAR_VELOCITY / (1.0 + (-u_v).exp()),
        u_w.tanh() * MAX_ANGULAR_VELOCITY,
    )
}

/// `(1/B) Σ (Q(s, a) − y)²` and the ReLU pattern it was evaluated under.
pub fn critic_loss_oracle(
    critic: &NetworkWeights<f64>,
    states: &[f64],
    actions: &[f64],
    targets: &[f64],
) -> (f64, Vec<bool>) {
    let batch = targets.len();
    let mut loss = 0.0;
    let mut pattern = Vec::new();
    for i in 0..batch {
        let (q, p) = forward_oracle(
            critic,
            &states[i * OBS_DIM..(i + 1) * OBS_DIM],
            Some(&actions[2 * i..2 * i + 2]),
        );
        loss += (q[0] - targets[i]).powi(2);
        pattern.extend(p);
    }
    (loss / batch as f64, pattern)
}

/// `(1/B) Σ Q(s, π(s))` and the combined actor/critic ReLU pattern.
pub fn actor_objective_oracle(
    actor: &NetworkWeights<f64>,
    critic: &NetworkWeights<f64>,
    states: &[f64],
    batch: usize,
) -> (f64, Vec<bool>) {
    let mut j = 0.0;
    let mut pattern = Vec::new();
    for i in 0..batch {
        let s = &states[i * OBS_DIM..(i + 1) * OBS_DIM];
        let (u, pa) = forward_oracle(actor, s, None);
        let (v, w) = squash_oracle(u[0], u[1]);
        let (q, pc) = forward_oracle(critic, s, Some(&[v, w]));
        j += q[0];
        pattern.extend(pa);
        pattern.extend(pc);
    }
    (j / batch as f64, pattern)
}

pub fn random_states<R: Rng>(rng: &mut R, batch: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(batch * OBS_DIM);
    for _ in 0..batch {
        out.push(rng.random_range(0.0..5.0));
        out.push(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
        for _ in 0..BEAM_COUNT {
            // most beams see nothing, as in open space
            out.push(if rng.random_bool(0.6) { 0.0 } else { rng.random_range(0.0..1.0) });
        }
    }
    out
}

pub fn random_actions<R: Rng>(rng: &mut R, batch: usize) -> Vec<f64> {
    (0..batch)
        .flat_map(|_| {
            [
                rng.random_range(0.0..=MAX_LINEAR_VELOCITY),
                rng.random_range(-MAX_ANGULAR_VELOCITY..=MAX_ANGULAR_VELOCITY),
            ]
        })
        .collect()
}

/// Outcome of comparing one gradient against central differences.
pub enum GradCheck {
    /// Largest relative error over all parameters.
    Compared(f64),
    /// A ±h perturbation flipped a ReLU unit, so finite differences do not
    /// describe the derivative at this point.
    Kinked,
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-7)
}

/// Central differences of `f` over every parameter of `net`, compared to
/// `analytic`.
pub fn check_gradient<F>(net: &NetworkWeights<f64>, analytic: &NetworkWeights<f64>, h: f64, mut f: F) -> GradCheck
where
    F: FnMut(&NetworkWeights<f64>) -> (f64, Vec<bool>),
{
    let (_, base) = f(net);
    let mut probe = net.clone();
    let mut worst: f64 = 0.0;
    for p in 0..net.param_count() {
        let orig = probe.params()[p];
        probe.params_mut()[p] = orig + h;
        let (plus, pp) = f(&probe);
        probe.params_mut()[p] = orig - h;
        let (minus, pm) = f(&probe);
        probe.params_mut()[p] = orig;
        if pp != base || pm != base {
            return GradCheck::Kinked;
        }
        let fd = (plus - minus) / (2.0 * h);
        worst = worst.max(relative_error(analytic.params()[p], fd));
    }
    GradCheck::Compared(worst)
}

/// Random walled arena with up to four rectangular obstacles and a pose in
/// free space.
pub fn random_scene<R: Rng>(rng: &mut R) -> (ArenaSpec, Pose) {
    let w = rng.random_range(2.0..8.0);
    let h = rng.random_range(2.0..8.0);
    let count = rng.random_range(0..=4);
    let obstacles = (0..count)
        .map(|_| {
            let sw = rng.random_range(0.1..1.5f64).min(w * 0.5);
            let sh = rng.random_range(0.1..1.5f64).min(h * 0.5);
            let x = rng.random_range(0.0..w - sw);
            let y = rng.random_range(0.0..h - sh);
            Rect::new(x, y, x + sw, y + sh)
        })
        .collect();
    let arena = ArenaSpec::open(w, h).with_obstacles(obstacles);
    loop {
        let x = rng.random_range(0.05..w - 0.05);
        let y = rng.random_range(0.05..h - 0.05);
        if arena.clearance(x, y) >= 0.05 {
            return (arena, Pose::new(x, y, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)));
        }
    }
}

/// Walks the beam forward in 1 mm increments until it leaves the arena or
/// enters an obstacle.
pub fn ray_march(arena: &ArenaSpec, x: f64, y: f64, angle: f64) -> f64 {
    const STEP: f64 = 1e-3;
    let (dy, dx) = angle.sin_cos();
    let mut i = 0u64;
    loop {
        let t = i as f64 * STEP;
        if t >= arena.max_range {
            return arena.max_range;
        }
        let (px, py) = (x + t * dx, y + t * dy);
        let outside = px <= 0.0 || py <= 0.0 || px >= arena.width || py >= arena.height;
        let blocked = arena
            .obstacles
            .iter()
            .any(|r| px >= r.min_x && px <= r.max_x && py >= r.min_y && py <= r.max_y);
        if outside || blocked {
            return t;
        }
        i += 1;
    }
}
