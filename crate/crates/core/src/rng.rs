//! Seeded random streams.
//!
//! Every consumer draws from its own ChaCha8 stream whose key is the
//! SHA-256 digest of the master seed and a label, so adding a consumer
//! never shifts the numbers another one sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Environment variable read when no seed is given on the command line.
pub const SEED_ENV: &str = "RSP_FORGE_SEED";

pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    let digest: [u8; 32] = h.finalize().into();
    ChaCha8Rng::from_seed(digest)
}
