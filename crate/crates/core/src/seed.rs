//! Deterministic seed derivation.
//!
//! Every random draw is keyed by a path of integers (master seed, cell,
//! trial, role, ...) hashed with the SplitMix64 finalizer, so the value a
//! consumer sees never depends on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes `master` together with `path` into a sub-seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut h = mix(master.wrapping_add(GOLDEN));
    for (i, &w) in path.iter().enumerate() {
        h = mix(h ^ mix(w.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 2))));
    }
    h
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Roles distinguishing independent draws within one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Role {
    LinearForm = 1,
    OsculatingForm = 2,
    Point = 3,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable_and_path_sensitive() {
        assert_eq!(derive_seed(7, &[1, 2, 3]), derive_seed(7, &[1, 2, 3]));
        assert_ne!(derive_seed(7, &[1, 2, 3]), derive_seed(7, &[1, 3, 2]));
        assert_ne!(derive_seed(7, &[1, 2, 3]), derive_seed(8, &[1, 2, 3]));
        assert_ne!(derive_seed(7, &[0]), derive_seed(7, &[0, 0]));
    }
}
