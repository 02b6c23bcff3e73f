//! Federated deep reinforcement learning for simulated robot swarms.
//!
//! The crate trains DDPG navigation controllers for a group of differential
//! drive robots, each in its own arena, under four orchestration strategies:
//! independent learners, a shared network, shared experience, and federated
//! weight averaging with a soft blend. Every robot/server transfer is
//! accounted for in bytes so strategies can be compared under the same
//! communication budget.
//!
//! Module map:
//! - [`arena`]: kinematic world, lidar, reward and termination logic
//! - [`nn`]: dense networks, backpropagation, Adam, weight-space arithmetic
//! - [`ddpg`]: replay memory, exploration, TD targets, the update step
//! - [`strategies`]: IDDPG / SNDDPG / SEDDPG / FLDDPG orchestration
//! - [`ledger`]: communication accounting and budget derivation
//! - [`metrics`]: training-health and evaluation metrics
//! - [`harness`]: configuration, experiment runs, CSV/JSON emission

pub mod arena;
pub mod ddpg;
pub mod error;
pub mod harness;
pub mod ledger;
pub mod metrics;
pub mod nn;
pub mod rng;
pub mod strategies;

pub use error::{Error, Result};
