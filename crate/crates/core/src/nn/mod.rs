//! Dense networks with exact backpropagation, Adam, and the weight-space
//! operations used by federated training.

mod adam;
pub mod checkpoint;
mod dense;
mod policy;
pub(crate) use policy::critic_regression;
mod weights;

pub use adam::{adam_step, AdamConfig, AdamState, Direction};
pub use policy::{
    actor_forward, actor_forward_batch, actor_layers, backprop_actor, backprop_critic,
    critic_forward, critic_forward_batch, critic_layers, new_actor, new_critic,
};
pub use weights::{
    fedavg, serialized_size, soft_blend, Activation, LayerSpec, NetworkWeights, Scalar, SideInput,
};
