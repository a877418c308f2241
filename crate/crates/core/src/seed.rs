//! Seed derivation and the random number generator used everywhere.
//!
//! A run is driven by one 64-bit seed. Each subsystem derives its own stream
//! from that seed and a fixed label: the sub-seed is the first eight bytes
//! (little-endian) of `SHA-256(label || 0x00 || seed.to_le_bytes())`. The
//! generator seeded with it is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub const LABEL_RANGE_FINDER: &str = "linalg.range_finder";
pub const LABEL_RANDOM_PAIRS: &str = "eval.random_pairs";
pub const LABEL_RANDOM_MATRIX: &str = "linalg.random_matrix";

pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(label.as_bytes());
    hasher.update([0u8]);
    hasher.update(seed.to_le_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label))
}
