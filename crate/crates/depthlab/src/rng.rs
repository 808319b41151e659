//! Deterministic seed derivation. Every random decision in the crate flows
//! from a master seed through `derive_seed`, so reruns reproduce results
//! bit-for-bit regardless of thread count or scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 step. Bijective on u64, passes BigCrush as a mixer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a master seed and a coordinate path (pair index, opening index,
/// color, game number, ...) into one stream seed. Appending the length keeps
/// distinct paths from colliding by prefix.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut s = splitmix64(master ^ 0x6465_7074_686c_6162); // "depthlab"
    for &p in parts {
        s = splitmix64(s ^ p);
    }
    splitmix64(s ^ parts.len() as u64)
}

/// Agent and playout streams. ChaCha8 is fast, seedable, and identical on
/// every platform.
pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn splitmix_is_bijective_on_probe_set() {
        let mut seen = HashSet::new();
        for i in 0..10_000u64 {
            assert!(seen.insert(splitmix64(i)));
        }
    }

    #[test]
    fn derived_seeds_distinct_across_grid() {
        // The coordinate grid of a largish experiment: 8 pairs x 12 openings
        // x 2 colors x 50 games, plus prefix-shadow cases.
        let mut seen = HashSet::new();
        for pair in 0..8u64 {
            for op in 0..12u64 {
                for color in 0..2u64 {
                    for k in 0..50u64 {
                        assert!(
                            seen.insert(derive_seed(42, &[pair, op, color, k])),
                            "collision at {pair},{op},{color},{k}"
                        );
                    }
                }
            }
        }
        assert!(seen.insert(derive_seed(42, &[0])));
        assert!(seen.insert(derive_seed(42, &[0, 0])));
        assert!(seen.insert(derive_seed(42, &[0, 0, 0])));
        assert!(seen.insert(derive_seed(42, &[])));
    }

    #[test]
    fn different_masters_differ() {
        assert_ne!(derive_seed(1, &[3, 4]), derive_seed(2, &[3, 4]));
    }
}
