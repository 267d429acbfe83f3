//! Seeded random streams.
//!
//! Every sampler takes a plain `u64` seed and builds a [`ChaCha8Rng`] from it.
//! Independent substreams (one per trial, per size, per worker) are derived by
//! hashing the parent seed together with the substream index through
//! SplitMix64, so a trial's randomness depends only on `(base seed, index)` and
//! never on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of substream `index` under `seed`: `splitmix64(seed ^ splitmix64(index))`.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn substream(seed: u64, index: u64) -> Rng {
    rng_from_seed(substream_seed(seed, index))
}
