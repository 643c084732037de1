//! Seed derivation and the fixed PRNG used everywhere in the crate.
//!
//! All randomness flows through [`Rng`], a ChaCha8 stream cipher generator
//! seeded via `rand_chacha`'s `seed_from_u64`. ChaCha output is specified
//! byte-for-byte, so a given seed yields the same stream on every platform.
//!
//! Per-trial seeds are derived from a master seed with
//! `trial_seed(m, i) = splitmix64(m ^ splitmix64(i + 0x9E37_79B9_7F4A_7C15))`.
//! Sub-streams (for example the sprinkle round of a coupled sample) use
//! [`substream`] with a fixed tag.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(master: u64, trial: u64) -> u64 {
    splitmix64(master ^ splitmix64(trial.wrapping_add(GOLDEN)))
}

/// Independent stream keyed by `tag` below `seed`.
pub fn substream(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag.rotate_left(17) ^ 0xD1B5_4A32_D192_ED03))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
