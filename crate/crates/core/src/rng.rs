//! Seed derivation for reproducible, independent random streams.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] whose seed is
//! derived from a master seed and a path of integer tags (color index, round
//! index, step index, ...). Two different paths give statistically
//! independent streams; the same path always gives the same stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Mixes a master seed with a tag path into a 64-bit seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut h = splitmix64(master ^ 0x6A09_E667_F3BC_C908);
    for (depth, &tag) in path.iter().enumerate() {
        h = splitmix64(h ^ splitmix64(tag.wrapping_add((depth as u64 + 1) << 56)));
    }
    h
}

pub fn stream(master: u64, path: &[u64]) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}
