//! Counter-style seeding: every trial gets its own stream, derived from the
//! master seed and the trial's coordinates, so results do not depend on how
//! trials are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash of a key sequence into one seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x243f_6a88_85a3_08d3, |h, &p| splitmix(h ^ splitmix(p)))
}

pub fn trial_seed(master: u64, d: u64, p_index: u64, trial: u64) -> u64 {
    derive_seed(&[master, d, p_index, trial])
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
