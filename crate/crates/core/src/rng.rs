//! Seeded randomness.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded through
//! [`stream_rng`]. Independent streams (the user set, Monte Carlo run `k`, ...)
//! are separated by deriving a sub-seed with [`sub_seed`], which mixes the
//! master seed and the stream id with the SplitMix64 finalizer. ChaCha8 output
//! for a given 64-bit seed is fixed by `rand_chacha`, so runs are
//! bit-reproducible across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream reserved for drawing the fixed user set of an experiment.
pub const USER_STREAM: u64 = 0;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `sub_seed = splitmix64(splitmix64(seed) ^ splitmix64(stream_id))`.
pub fn sub_seed(seed: u64, stream_id: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(stream_id.wrapping_mul(GOLDEN_GAMMA)))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(seed: u64, stream_id: u64) -> ChaCha8Rng {
    seeded_rng(sub_seed(seed, stream_id))
}
