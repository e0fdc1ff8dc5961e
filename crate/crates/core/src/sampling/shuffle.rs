//! Seeded permutations.
//!
//! The generator is ChaCha20 keyed by `SeedableRng::seed_from_u64(seed)`.
//! One generator is created per sampling call and advanced monotonically, so
//! each retry draws a fresh permutation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type SampleRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Forward Fisher-Yates over the first `amount` positions: afterwards
/// `items[..amount]` is a uniformly random ordered selection of `items`.
pub fn partial_shuffle<T, R: Rng + ?Sized>(items: &mut [T], amount: usize, rng: &mut R) {
    let n = items.len();
    let steps = amount.min(n.saturating_sub(1));
    for i in 0..steps {
        let j = rng.random_range(i..n);
        items.swap(i, j);
    }
}

/// Uniform random permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    partial_shuffle(&mut idx, n, rng);
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn same_seed_same_permutation() {
        let a = permutation(50, &mut rng_from_seed(7));
        let b = permutation(50, &mut rng_from_seed(7));
        let c = permutation(50, &mut rng_from_seed(8));
        assert_eq!(a, b);
        assert_ne!(a, c);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn stream_advances_between_draws() {
        let mut rng = rng_from_seed(1);
        let first = permutation(20, &mut rng);
        let second = permutation(20, &mut rng);
        assert_ne!(first, second);
    }

    #[test]
    fn ordered_pairs_are_uniform() {
        // 4 items, take 2: 12 ordered pairs, each with probability 1/12.
        let mut rng = rng_from_seed(99);
        let mut counts: HashMap<(u8, u8), u32> = HashMap::new();
        let trials = 60_000;
        for _ in 0..trials {
            let mut items = [0u8, 1, 2, 3];
            partial_shuffle(&mut items, 2, &mut rng);
            *counts.entry((items[0], items[1])).or_default() += 1;
        }
        assert_eq!(counts.len(), 12);
        for &c in counts.values() {
            let f = c as f64 / trials as f64;
            assert!((f - 1.0 / 12.0).abs() < 0.006, "frequency {f}");
        }
    }
}
