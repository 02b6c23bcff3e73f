//! Batched forward/backward passes over a [`NetworkWeights`] topology.
//!
//! Batches are row-major `batch × width` slices.

use super::weights::{NetworkWeights, Scalar};
use crate::error::{Error, Result};

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    let mut acc = [T::zero(); 8];
    for (x, y) in ca.zip(cb) {
        for i in 0..8 {
            acc[i] = acc[i] + x[i] * y[i];
        }
    }
    let mut s = ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
    for (x, y) in ra.iter().zip(rb) {
        s = s + *x * *y;
    }
    s
}

#[inline]
pub(crate) fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * *xi;
    }
}

/// Activations retained for the backward pass.
pub(crate) struct Trace<T> {
    batch: usize,
    /// Input matrix of each layer (after side-input concatenation).
    inputs: Vec<Vec<T>>,
    /// Activated output of each layer.
    outputs: Vec<Vec<T>>,
}

impl<T: Scalar> Trace<T> {
    pub(crate) fn output(&self) -> &[T] {
        self.outputs.last().map(|v| v.as_slice()).unwrap_or(&[])
    }
}

pub(crate) fn forward<T: Scalar>(
    net: &NetworkWeights<T>,
    input: &[T],
    side: Option<&[T]>,
    batch: usize,
) -> Result<Trace<T>> {
    if batch == 0 {
        return Err(Error::EmptyBatch);
    }
    if input.len() != batch * net.input_dim() {
        return Err(Error::Shape(format!(
            "input holds {} values, expected {batch} x {}",
            input.len(),
            net.input_dim()
        )));
    }
    match (net.side_input(), side) {
        (Some(s), Some(values)) if values.len() == batch * s.width => {}
        (None, None) => {}
        (expected, got) => {
            return Err(Error::Shape(format!(
                "side input mismatch: network expects {:?}, got {} values",
                expected,
                got.map_or(0, |v| v.len())
            )))
        }
    }

    let layers = net.layers();
    let mut inputs = Vec::with_capacity(layers.len());
    let mut outputs: Vec<Vec<T>> = Vec::with_capacity(layers.len());
    for (k, spec) in layers.iter().enumerate() {
        let x = if k == 0 {
            input.to_vec()
        } else {
            let prev = &outputs[k - 1];
            match (net.side_input(), side) {
                (Some(s), Some(values)) if s.layer == k => {
                    let pw = layers[k - 1].output_dim;
                    let mut x = Vec::with_capacity(batch * spec.input_dim);
                    for b in 0..batch {
                        x.extend_from_slice(&prev[b * pw..(b + 1) * pw]);
                        x.extend_from_slice(&values[b * s.width..(b + 1) * s.width]);
                    }
                    x
                }
                _ => prev.clone(),
            }
        };
        let w = net.weights(k);
        let bias = net.bias(k);
        let (n_in, n_out) = (spec.input_dim, spec.output_dim);
        let mut y = vec![T::zero(); batch * n_out];
        for b in 0..batch {
            let xb = &x[b * n_in..(b + 1) * n_in];
            let yb = &mut y[b * n_out..(b + 1) * n_out];
            for o in 0..n_out {
                let z = bias[o] + dot(&w[o * n_in..(o + 1) * n_in], xb);
                yb[o] = spec.activation.apply(z);
            }
        }
        inputs.push(x);
        outputs.push(y);
    }
    Ok(Trace {
        batch,
        inputs,
        outputs,
    })
}

/// Gradient flowing back out of the side input, when the network has one.
pub(crate) struct InputGrads<T> {
    pub side: Option<Vec<T>>,
}

/// Backpropagates `grad_output` (∂L/∂output, `batch × output_dim`). Parameter
/// gradients are accumulated into `grads` when given.
pub(crate) fn backward<T: Scalar>(
    net: &NetworkWeights<T>,
    trace: &Trace<T>,
    grad_output: &[T],
    mut grads: Option<&mut NetworkWeights<T>>,
) -> InputGrads<T> {
    let batch = trace.batch;
    let layers = net.layers();
    let mut g = grad_output.to_vec();
    let mut side_grad = None;
    for k in (0..layers.len()).rev() {
        let spec = layers[k];
        let (n_in, n_out) = (spec.input_dim, spec.output_dim);
        let y = &trace.outputs[k];
        let x = &trace.inputs[k];
        let w = net.weights(k);
        for (gi, yi) in g.iter_mut().zip(y.iter()) {
            *gi = *gi * spec.activation.derivative_from_output(*yi);
        }
        if let Some(grads) = grads.as_deref_mut() {
            let (gw, gb) = grads.layer_mut(k);
            for b in 0..batch {
                let xb = &x[b * n_in..(b + 1) * n_in];
                for o in 0..n_out {
                    let dz = g[b * n_out + o];
                    if dz != T::zero() {
                        axpy(dz, xb, &mut gw[o * n_in..(o + 1) * n_in]);
                    }
                    gb[o] = gb[o] + dz;
                }
            }
        }
        let feeds_side = matches!(net.side_input(), Some(s) if s.layer == k);
        if k == 0 && !feeds_side {
            break;
        }
        let mut dx = vec![T::zero(); batch * n_in];
        for b in 0..batch {
            let dxb = &mut dx[b * n_in..(b + 1) * n_in];
            for o in 0..n_out {
                let dz = g[b * n_out + o];
                if dz != T::zero() {
                    axpy(dz, &w[o * n_in..(o + 1) * n_in], dxb);
                }
            }
        }
        match net.side_input() {
            Some(s) if s.layer == k => {
                let pw = n_in - s.width;
                let mut prev = Vec::with_capacity(batch * pw);
                let mut side = Vec::with_capacity(batch * s.width);
                for b in 0..batch {
                    let row = &dx[b * n_in..(b + 1) * n_in];
                    prev.extend_from_slice(&row[..pw]);
                    side.extend_from_slice(&row[pw..]);
                }
                side_grad = Some(side);
                g = prev;
            }
            _ => g = dx,
        }
    }
    InputGrads { side: side_grad }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_handles_remainders() {
        let a: Vec<f64> = (0..19).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..19).map(|i| (i * 2) as f64).collect();
        let expected: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert_eq!(dot(&a, &b), expected);
        assert_eq!(dot::<f64>(&[], &[]), 0.0);
    }
}
