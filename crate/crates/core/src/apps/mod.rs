//! Producer and consumer applications, driven by the simulator.

mod consumer;
mod producer;

pub use consumer::{AppAction, Consumer, ConsumerError, Phase};
pub use producer::Producer;
