//! Seedable, scheduling-independent random streams.
//!
//! Every logical work unit (a ray, a channel, a noise lane) derives its
//! own stream from the master seed and a path of indices such as
//! `[tx, face, ray]`. The derivation is a pure hash, so the streams never
//! depend on worker count, execution order, or how many draws another
//! unit consumed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The stream-cipher RNG used for all sampling.
pub type Stream = ChaCha8Rng;

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the stream identified by `path` under `master_seed`.
pub fn derive_stream(master_seed: u64, path: &[u64]) -> Stream {
    let mut state = mix(master_seed ^ 0x9E37_79B9_7F4A_7C15);
    for &id in path {
        // Rotation keeps the absorption order-sensitive.
        state = mix(state.rotate_left(29) ^ mix(id.wrapping_add(0x9E37_79B9_7F4A_7C15)));
    }
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        state = mix(state.wrapping_add(0x9E37_79B9_7F4A_7C15));
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    Stream::from_seed(seed)
}
