//! Seeded randomness.
//!
//! Every randomized routine takes an explicit RNG. Independent trial streams
//! are derived from a root seed as `stream(i) = ChaCha8(mix(root, i))`, where
//! `mix` is the SplitMix64 finaliser applied to `root + (i + 1)·φ64`. Trial
//! results therefore do not depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut z = root.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(root: u64, stream: u64) -> SimRng {
    rng_from_seed(derive_seed(root, stream))
}
