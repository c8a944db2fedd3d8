//! Seeded random streams. A (seed, index) pair names an independent ChaCha8
//! stream, so parallel consumers can be reproduced exactly.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

pub type Stream = ChaCha8Rng;

/// The stream with the given index under `seed`.
pub fn stream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// An independent root seed for a second purpose under the same seed, drawn
/// from stream u64::MAX − tag, far above any per-row or per-projection index.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    stream(seed, u64::MAX - tag).next_u64()
}

/// Uniform draw on the open interval (0, 1).
pub fn uniform_open(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw.
pub fn normal(rng: &mut impl RngCore) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform index in 0..n (n > 0), by rejection to avoid modulo bias.
pub fn index_below(rng: &mut impl RngCore, n: usize) -> usize {
    let n = n as u64;
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return (v % n) as usize;
        }
    }
}
