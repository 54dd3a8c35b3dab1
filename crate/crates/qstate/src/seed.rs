//! Deterministic seed derivation for parallel Monte-Carlo loops.
//!
//! Every sampled experiment takes a base seed and derives one independent
//! stream per task index. The derivation is a fixed public mixing function,
//! so results never depend on thread count or scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Odd increment folded into the task index (golden-ratio constant).
pub const STREAM_INCREMENT: u64 = 0x9e37_79b9_7f4a_7c15;

const MIX_MUL_1: u64 = 0xbf58_476d_1ce4_e5b9;
const MIX_MUL_2: u64 = 0x94d0_49bb_1331_11eb;

/// 64-bit finalizer (splitmix64). Bijective on `u64`.
#[inline]
pub fn mix64(mut v: u64) -> u64 {
    v ^= v >> 30;
    v = v.wrapping_mul(MIX_MUL_1);
    v ^= v >> 27;
    v = v.wrapping_mul(MIX_MUL_2);
    v ^= v >> 31;
    v
}

/// Derive the stream seed for task `index` under `base`.
///
/// Injective in `index` for a fixed `base`: the increment is odd, so
/// `(index + 1) * STREAM_INCREMENT` never collides mod 2^64, and the
/// finalizer is a bijection.
#[inline]
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(STREAM_INCREMENT)))
}

/// Seeded stream for task `index` under `base`.
pub fn stream(base: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, index))
}
