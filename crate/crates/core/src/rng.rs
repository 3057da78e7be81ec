//! Named, seed-derived random streams.
//!
//! Every stochastic component draws from its own ChaCha stream so that the
//! scramble, initialization, migration and mutation sequences can be
//! reproduced independently of each other.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SCRAMBLE: &str = "scramble";
pub const INIT: &str = "init";
pub const MIGRATION: &str = "migration";
pub const MUTATION: &str = "mutation";
pub const RESTART: &str = "restart";

/// FNV-1a, used to turn a stream name into a stable 64-bit tag.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic generator for substream `name`/`index` under `seed`.
pub fn substream(seed: u64, name: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(mix(fnv1a(name.as_bytes()) ^ mix(index)));
    rng
}
