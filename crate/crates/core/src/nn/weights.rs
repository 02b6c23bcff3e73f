use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floating point type the network stack is generic over. Training runs in
/// `f32`; gradient checks run the same code in `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Default + Debug + Send + Sync + Sum + 'static
{
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 converts to every Scalar")
    }
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("every Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Activation {
    Relu,
    Tanh,
    Sigmoid,
    Linear,
}

impl Activation {
    #[inline]
    pub fn apply<T: Scalar>(self, z: T) -> T {
        match self {
            Activation::Relu => z.max(T::zero()),
            Activation::Tanh => z.tanh(),
            Activation::Sigmoid => T::one() / (T::one() + (-z).exp()),
            Activation::Linear => z,
        }
    }

    /// Derivative expressed through the activation's output `y`.
    #[inline]
    pub fn derivative_from_output<T: Scalar>(self, y: T) -> T {
        match self {
            Activation::Relu => {
                if y > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Activation::Tanh => T::one() - y * y,
            Activation::Sigmoid => y * (T::one() - y),
            Activation::Linear => T::one(),
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            Activation::Relu => 0,
            Activation::Tanh => 1,
            Activation::Sigmoid => 2,
            Activation::Linear => 3,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => Activation::Relu,
            1 => Activation::Tanh,
            2 => Activation::Sigmoid,
            3 => Activation::Linear,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayerSpec {
    pub input_dim: usize,
    pub output_dim: usize,
    pub activation: Activation,
}

impl LayerSpec {
    pub fn new(input_dim: usize, output_dim: usize, activation: Activation) -> Self {
        Self {
            input_dim,
            output_dim,
            activation,
        }
    }

    pub fn param_count(&self) -> usize {
        self.input_dim * self.output_dim + self.output_dim
    }
}

/// Extra inputs appended after the previous layer's activations when
/// entering `layer` (the critic feeds the action in this way).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SideInput {
    pub layer: usize,
    pub width: usize,
}

/// Parameters of a dense network stored as one flat vector. Layer `k`
/// occupies a row-major `output_dim × input_dim` weight block followed by
/// its `output_dim` biases.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkWeights<T = f32> {
    layers: Vec<LayerSpec>,
    side_input: Option<SideInput>,
    offsets: Vec<usize>,
    params: Vec<T>,
}

fn check_topology(layers: &[LayerSpec], side: Option<SideInput>) -> Result<()> {
    for (k, l) in layers.iter().enumerate() {
        if l.input_dim == 0 || l.output_dim == 0 {
            return Err(Error::Shape(format!("layer {k} has a zero dimension")));
        }
    }
    if let Some(s) = side {
        if s.layer == 0 || s.layer >= layers.len() || s.width == 0 {
            return Err(Error::Shape(format!(
                "side input must enter a hidden layer, got layer {} of {}",
                s.layer,
                layers.len()
            )));
        }
    }
    for k in 1..layers.len() {
        let extra = match side {
            Some(s) if s.layer == k => s.width,
            _ => 0,
        };
        if layers[k - 1].output_dim + extra != layers[k].input_dim {
            return Err(Error::Shape(format!(
                "layer {} emits {} values but layer {k} expects {} (side inputs: {extra})",
                k - 1,
                layers[k - 1].output_dim,
                layers[k].input_dim
            )));
        }
    }
    Ok(())
}

impl<T: Scalar> NetworkWeights<T> {
    pub fn zeros(layers: Vec<LayerSpec>, side_input: Option<SideInput>) -> Result<Self> {
        check_topology(&layers, side_input)?;
        let mut offsets = Vec::with_capacity(layers.len() + 1);
        let mut total = 0;
        for l in &layers {
            offsets.push(total);
            total += l.param_count();
        }
        offsets.push(total);
        Ok(Self {
            layers,
            side_input,
            offsets,
            params: vec![T::zero(); total],
        })
    }

    /// Uniform initialization in ±1/√fan_in for weights and biases.
    pub fn init_uniform<R: Rng + ?Sized>(
        layers: Vec<LayerSpec>,
        side_input: Option<SideInput>,
        rng: &mut R,
    ) -> Result<Self> {
        let mut net = Self::zeros(layers, side_input)?;
        for k in 0..net.layers.len() {
            let bound = 1.0 / (net.layers[k].input_dim as f64).sqrt();
            let range = net.offsets[k]..net.offsets[k + 1];
            for p in &mut net.params[range] {
                *p = T::from_f64_lossy(rng.random_range(-bound..bound));
            }
        }
        Ok(net)
    }

    /// Builds a network from an explicit parameter vector.
    pub fn from_params(
        layers: Vec<LayerSpec>,
        side_input: Option<SideInput>,
        params: Vec<T>,
    ) -> Result<Self> {
        let mut net = Self::zeros(layers, side_input)?;
        if params.len() != net.params.len() {
            return Err(Error::Shape(format!(
                "expected {} parameters, got {}",
                net.params.len(),
                params.len()
            )));
        }
        net.params = params;
        Ok(net)
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            layers: self.layers.clone(),
            side_input: self.side_input,
            offsets: self.offsets.clone(),
            params: vec![T::zero(); self.params.len()],
        }
    }

    pub fn layers(&self) -> &[LayerSpec] {
        &self.layers
    }

    pub fn side_input(&self) -> Option<SideInput> {
        self.side_input
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().map_or(0, |l| l.input_dim)
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, |l| l.output_dim)
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [T] {
        &mut self.params
    }

    pub fn weights(&self, layer: usize) -> &[T] {
        let l = &self.layers[layer];
        let start = self.offsets[layer];
        &self.params[start..start + l.input_dim * l.output_dim]
    }

    pub fn bias(&self, layer: usize) -> &[T] {
        let l = &self.layers[layer];
        let start = self.offsets[layer] + l.input_dim * l.output_dim;
        &self.params[start..start + l.output_dim]
    }

    /// Mutable (weights, bias) views of one layer.
    pub fn layer_mut(&mut self, layer: usize) -> (&mut [T], &mut [T]) {
        let l = self.layers[layer];
        let block = &mut self.params[self.offsets[layer]..self.offsets[layer + 1]];
        block.split_at_mut(l.input_dim * l.output_dim)
    }

    pub fn same_shape<U>(&self, other: &NetworkWeights<U>) -> bool {
        self.layers == other.layers && self.side_input == other.side_input
    }

    pub fn check_same_shape<U>(&self, other: &NetworkWeights<U>) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "architectures differ: {:?} vs {:?}",
                self.layers, other.layers
            )))
        }
    }

    pub fn all_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }

    pub fn cast<U: Scalar>(&self) -> NetworkWeights<U> {
        NetworkWeights {
            layers: self.layers.clone(),
            side_input: self.side_input,
            offsets: self.offsets.clone(),
            params: self
                .params
                .iter()
                .map(|p| U::from_f64_lossy(p.to_f64_lossy()))
                .collect(),
        }
    }
}

/// Federated averaging: the elementwise arithmetic mean of architecturally
/// identical weight sets. Accumulates in `f64` and rounds once.
pub fn fedavg<T: Scalar>(sets: &[&NetworkWeights<T>]) -> Result<NetworkWeights<T>> {
    let first = sets.first().ok_or(Error::EmptyBatch)?;
    for s in &sets[1..] {
        first.check_same_shape(s)?;
    }
    let n = sets.len() as f64;
    let mut out = first.zeros_like();
    for (i, p) in out.params.iter_mut().enumerate() {
        let sum: f64 = sets.iter().map(|s| s.params[i].to_f64_lossy()).sum();
        *p = T::from_f64_lossy(sum / n);
    }
    Ok(out)
}

/// `tau · local + (1 − tau) · averaged`, elementwise.
pub fn soft_blend<T: Scalar>(
    local: &NetworkWeights<T>,
    averaged: &NetworkWeights<T>,
    tau: f64,
) -> Result<NetworkWeights<T>> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::param("tau", format!("must lie in [0, 1], got {tau}")));
    }
    local.check_same_shape(averaged)?;
    let mut out = local.zeros_like();
    for ((o, l), a) in out
        .params
        .iter_mut()
        .zip(local.params.iter())
        .zip(averaged.params.iter())
    {
        *o = T::from_f64_lossy(tau * l.to_f64_lossy() + (1.0 - tau) * a.to_f64_lossy());
    }
    Ok(out)
}

/// Payload size in bytes when every parameter travels as a 32-bit float.
pub fn serialized_size<T>(weights: &NetworkWeights<T>) -> u64 {
    weights.params.len() as u64 * 4
}
