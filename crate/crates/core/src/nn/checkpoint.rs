//! Weight checkpoint files.
//!
//! All integers and floats are little-endian:
//!
//! ```text
//! magic        4 bytes   "FSWN"
//! version      u32       1
//! layer_count  u32
//! side_layer   u32       u32::MAX when the network has no side input
//! side_width   u32
//! per layer:   input_dim u32, output_dim u32, activation u32
//!              (0 = relu, 1 = tanh, 2 = sigmoid, 3 = linear)
//! param_count  u64
//! payload      param_count × f32, layer by layer: row-major weights
//!              (output_dim × input_dim) then biases
//! ```

use std::io::{Read, Write};

use super::weights::{Activation, LayerSpec, NetworkWeights, SideInput};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"FSWN";
const VERSION: u32 = 1;
const NO_SIDE: u32 = u32::MAX;

fn dim(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Checkpoint(format!("dimension {v} exceeds u32")))
}

pub fn write_checkpoint<W: Write>(weights: &NetworkWeights<f32>, out: &mut W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&dim(weights.layers().len())?.to_le_bytes())?;
    let (side_layer, side_width) = match weights.side_input() {
        Some(s) => (dim(s.layer)?, dim(s.width)?),
        None => (NO_SIDE, 0),
    };
    out.write_all(&side_layer.to_le_bytes())?;
    out.write_all(&side_width.to_le_bytes())?;
    for l in weights.layers() {
        out.write_all(&dim(l.input_dim)?.to_le_bytes())?;
        out.write_all(&dim(l.output_dim)?.to_le_bytes())?;
        out.write_all(&(l.activation.tag() as u32).to_le_bytes())?;
    }
    out.write_all(&(weights.param_count() as u64).to_le_bytes())?;
    let mut payload = Vec::with_capacity(weights.param_count() * 4);
    for p in weights.params() {
        payload.extend_from_slice(&p.to_le_bytes());
    }
    out.write_all(&payload)?;
    Ok(())
}

pub fn to_bytes(weights: &NetworkWeights<f32>) -> Vec<u8> {
    let mut buf = Vec::new();
    write_checkpoint(weights, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_checkpoint<R: Read>(input: &mut R) -> Result<NetworkWeights<f32>> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = read_u32(input)?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let layer_count = read_u32(input)? as usize;
    let side_layer = read_u32(input)?;
    let side_width = read_u32(input)?;
    let side = (side_layer != NO_SIDE).then_some(SideInput {
        layer: side_layer as usize,
        width: side_width as usize,
    });
    let mut layers = Vec::with_capacity(layer_count.min(1024));
    for _ in 0..layer_count {
        let input_dim = read_u32(input)? as usize;
        let output_dim = read_u32(input)? as usize;
        let tag = read_u32(input)?;
        let activation = u8::try_from(tag)
            .ok()
            .and_then(Activation::from_tag)
            .ok_or_else(|| Error::Checkpoint(format!("unknown activation tag {tag}")))?;
        layers.push(LayerSpec::new(input_dim, output_dim, activation));
    }
    let mut count = [0u8; 8];
    input.read_exact(&mut count)?;
    let count = u64::from_le_bytes(count) as usize;
    let expected: usize = layers.iter().map(|l| l.param_count()).sum();
    if count != expected {
        return Err(Error::Checkpoint(format!(
            "payload declares {count} parameters, layers need {expected}"
        )));
    }
    let mut payload = vec![0u8; count * 4];
    input.read_exact(&mut payload)?;
    let params = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    NetworkWeights::from_params(layers, side, params)
}

pub fn from_bytes(mut bytes: &[u8]) -> Result<NetworkWeights<f32>> {
    read_checkpoint(&mut bytes)
}
