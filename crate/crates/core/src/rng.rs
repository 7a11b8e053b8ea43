//! Seeded randomness.
//!
//! Every randomized operation takes a `u64` seed and draws from a ChaCha8
//! stream, so a seed fully determines the output. Independent trials use
//! [`derive_seed`], a counter-based SplitMix64 derivation: trial `j` of a run
//! with master seed `s` uses `splitmix64(s + (j + 1) * 0x9E37_79B9_7F4A_7C15)`,
//! which can be recomputed for any single trial in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under master seed `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}
