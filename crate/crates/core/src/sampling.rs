//! Seeded uniform streams for inverse-transform sampling.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::mechanism::NoiseMechanism;

/// Golden-ratio increment used by SplitMix64; also spaces the substreams.
const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// The random stream type used throughout the crate.
pub type NoiseRng = SplitMix64;

/// Stream `id` derived from `seed`. Stream 0 is the plain seed.
///
/// Substreams start `2^48` SplitMix64 steps apart, so they do not overlap
/// for any realistic draw count.
pub fn noise_stream(seed: u64, id: u64) -> NoiseRng {
    let offset = (id << 48).wrapping_mul(GOLDEN_GAMMA);
    SplitMix64::seed_from_u64(seed.wrapping_add(offset))
}

/// A stream seeded from the operating system.
pub fn entropy_stream() -> NoiseRng {
    SplitMix64::from_entropy()
}

/// Draws `n` samples from `mech` using `rng`.
pub fn sample_n(mech: &dyn NoiseMechanism, rng: &mut dyn RngCore, n: usize) -> Vec<f64> {
    (0..n).map(|_| mech.sample(rng)).collect()
}
