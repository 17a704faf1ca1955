//! Deterministic seed derivation.
//!
//! Every stochastic decision in a run draws from its own sub-stream derived
//! from the master seed and a stable label, so adding draws in one place
//! (extra votes, extra candidates) never perturbs outcomes elsewhere.
//! Concurrent evaluation order cannot change results because the stream
//! for a (pair, repetition) query is a pure function of its identity.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream labels. Values are arbitrary but frozen: changing them changes
/// every seeded outcome in existing traces.
pub mod stream {
    /// One simulated oracle vote for a (pair, repetition).
    pub const VOTE: u64 = 0x01;
    /// Tie-break between two equally-voted thoughts.
    pub const TIE_BREAK: u64 = 0x02;
    /// Random pairing shuffle inside a selection round.
    pub const PAIRING: u64 = 0x03;
    /// Per-tree-round selection sub-seed.
    pub const ROUND: u64 = 0x04;
    /// Final-answer majority tie-break.
    pub const FINALIZE: u64 = 0x05;
    /// Scripted/simulated thought generation.
    pub const GENERATE: u64 = 0x06;
    /// Unparseable-reply fallback in LLM-backed oracles.
    pub const UNPARSEABLE: u64 = 0x07;
    /// Per-trial sub-seed in harness experiment loops.
    pub const TRIAL: u64 = 0x08;
}

/// splitmix64 finalizer; a bijective avalanche mix on `u64`.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a master seed and a label path.
pub fn derive(master: u64, parts: &[u64]) -> u64 {
    let mut acc = mix(master);
    for &p in parts {
        acc = mix(acc ^ mix(p));
    }
    acc
}

/// One uniform draw in `[0, 1)` from a derived seed (53-bit mantissa).
pub fn unit_uniform(seed: u64) -> f64 {
    (mix(seed) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A seeded RNG for shuffles and other multi-draw streams.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
