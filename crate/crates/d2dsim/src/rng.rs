//! Deterministic random streams.
//!
//! Reproducibility is the contract here: a master seed plus a trial index
//! fully determines every gain drawn in that trial, independent of worker
//! count or platform. ChaCha8 gives us that directly — one generator
//! keyed by the master seed, with the trial index selecting one of 2^64
//! independent streams. All variates are derived from the raw uniform
//! output by inverse CDF, so nothing else influences the draw sequence.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform stream owned by exactly one trial (or one test).
#[derive(Debug, Clone)]
pub struct TrialRng {
    inner: ChaCha8Rng,
}

impl TrialRng {
    /// Stream 0 of the given seed. Used where a single sequential stream
    /// is enough (unit tests, distribution checks).
    pub fn from_seed(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// The `index`-th independent substream of `master_seed`.
    pub fn substream(master_seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(index);
        TrialRng { inner }
    }

    /// Uniform draw on [0, 1) with 53 random bits.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Exponential draw with the given mean, by inverse CDF of the
    /// uniform stream. `u` in [0, 1) keeps `ln(1 - u)` finite, so the
    /// result is always finite and non-negative.
    #[inline]
    pub fn next_exponential(&mut self, mean: f64) -> f64 {
        -mean * (1.0 - self.next_uniform()).ln()
    }
}

/// Seed for sweep point `index`, derived from the sweep master seed.
/// SplitMix64-style mixing keeps neighbouring indices uncorrelated.
pub fn point_seed(master_seed: u64, index: usize) -> u64 {
    splitmix64(master_seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
