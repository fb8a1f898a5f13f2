//! Control synthesis and exact simulation for entangling target spins through
//! a mediating control register with always-on ZZ couplings.

pub mod error;
pub mod geometry;
pub mod logical;
pub mod noise;
pub mod pattern;
pub mod pauli;
pub mod presets;
pub mod protocols;
pub mod simulator;

pub use error::{Error, Result};
