//! Deterministic randomness plumbing: one root seed, per-worker streams.
//!
//! Every randomized operation takes a `u64` root seed and derives stream
//! seeds with a splitmix64 step, so results are reproducible bit-for-bit
//! regardless of thread count or scheduling.

use num_bigint::{BigUint, RandBigInt};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// splitmix64 output function; a full-period mixer on u64.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Seed for logical stream `stream` under root seed `root`.
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    splitmix64(root ^ splitmix64(stream.wrapping_add(0xa076_1d64_78bd_642f)))
}

pub fn rng_from(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Uniform value in [0, bound); bound must be positive.
pub fn below(rng: &mut ChaCha12Rng, bound: &BigUint) -> BigUint {
    rng.gen_biguint_below(bound)
}

/// Uniform value in [1, bound]; bound must be positive.
pub fn one_to(rng: &mut ChaCha12Rng, bound: &BigUint) -> BigUint {
    rng.gen_biguint_below(bound) + 1u32
}
