//! Keyed counter-based random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream keyed by
//! `(seed, purpose)` and selected by a block index, so a value depends only
//! on its position and never on which worker produced it.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Default seed for generators and the source picker.
pub const DEFAULT_SEED: u64 = 27_491_095;

/// Number of consecutive items drawn from one stream.
pub(crate) const BLOCK_LEN: usize = 1024;

#[derive(Debug, Clone, Copy)]
#[repr(u8)]
pub(crate) enum Purpose {
    UniformEdges = 1,
    KroneckerEdges = 2,
    Weights = 3,
    Sources = 4,
}

/// Key bytes: seed (little-endian) in bytes 0..8, purpose tag in byte 8,
/// remaining bytes zero. The block index selects the ChaCha stream.
pub(crate) fn keyed_stream(seed: u64, purpose: Purpose, block: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8] = purpose as u8;
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(block);
    rng
}

/// Exactly uniform integer in `[0, bound)` by masked rejection.
pub(crate) fn uniform_below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0, "empty range");
    if bound == 1 {
        return 0;
    }
    let mask = u64::MAX >> (bound - 1).leading_zeros();
    loop {
        let x = rng.next_u64() & mask;
        if x < bound {
            return x;
        }
    }
}

/// Uniform `f64` in `[0, 1)` with 53 random bits.
pub(crate) fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
