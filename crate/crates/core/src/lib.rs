//! Simulation and verification laboratory for remote state preparation.
//!
//! Ideal resources, the protocols that construct them, and the simulators
//! used in their security proofs are executed on exact density matrices.
//! Hidden randomness is averaged exhaustively, so "perfectly constructs"
//! becomes an entrywise equality between real-world and ideal-world states.

pub mod error;
pub mod qstate;
pub mod groups;
pub mod resources;
pub mod protocols;
pub mod simulators;
pub mod security;
pub mod rng;
pub mod cli;

pub use error::{Error, Result};
