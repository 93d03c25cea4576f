//! Splittable seeding: the randomness of trial `i` is a pure function of `(seed, i)`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Sub-stream of a trial, for procedures that need several independent sources.
pub fn sub_rng(seed: u64, trial: u64, lane: u64) -> ChaCha8Rng {
    let mixed = seed ^ lane.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    trial_rng(mixed, trial)
}
