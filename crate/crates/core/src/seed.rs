//! Deterministic derivation of sub-seeds from a single top-level seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `parent` and a scope label plus index path.
pub fn derive(parent: u64, scope: &str, path: &[u64]) -> u64 {
    let mut h = mix(parent);
    for b in scope.bytes() {
        h = mix(h ^ u64::from(b));
    }
    for &p in path {
        h = mix(h ^ p);
    }
    h
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
