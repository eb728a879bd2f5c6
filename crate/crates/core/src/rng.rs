//! Deterministic random number generation.
//!
//! Every stochastic step in the crate (dataset splits, per-epoch shuffles,
//! bootstrap sampling, feature subsampling) draws from [`SplitMix64`], a
//! fixed, publicly specified 64-bit generator. The exact algorithms are
//! documented here so that an independent implementation can reproduce every
//! shuffle bit for bit:
//!
//! - stream: SplitMix64 (Steele et al.), `state += 0x9E3779B97F4A7C15`,
//!   then two xor-shift-multiply rounds per output;
//! - bounded draw: `next_u64() % bound` (documented modulo reduction);
//! - shuffle: Fisher-Yates from the highest index down, swapping index `i`
//!   with `bounded(i + 1)`;
//! - derived seeds: FNV-1a 64 hash of a key string, XORed into the parent
//!   seed and passed through one SplitMix64 output step.

/// SplitMix64 pseudo-random generator. Stable across platforms and releases.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, bound)` by modulo reduction. `bound` must be > 0.
    pub fn bounded(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// Uniform draw in `[0, 1)` using the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.bounded(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// First `n` elements of a shuffled copy: a uniform sample without
    /// replacement. Returns all items when `n >= items.len()`.
    pub fn sample<T: Clone>(&mut self, items: &[T], n: usize) -> Vec<T> {
        let mut idx: Vec<usize> = (0..items.len()).collect();
        self.shuffle(&mut idx);
        idx.truncate(n.min(items.len()));
        idx.into_iter().map(|i| items[i].clone()).collect()
    }
}

/// FNV-1a 64-bit hash of a byte string.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Derive a child seed from a parent seed and a textual key. Used for
/// per-configuration, per-label, and per-tree seed derivation so that
/// adding or removing sibling work units never changes existing streams.
pub fn derive_seed(parent: u64, key: &str) -> u64 {
    SplitMix64::new(parent ^ fnv1a(key.as_bytes())).next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // Published reference stream for seed 1234567.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
    }

    #[test]
    fn shuffle_is_deterministic() {
        let mut a: Vec<u32> = (0..100).collect();
        let mut b: Vec<u32> = (0..100).collect();
        SplitMix64::new(42).shuffle(&mut a);
        SplitMix64::new(42).shuffle(&mut b);
        assert_eq!(a, b);
        let mut c: Vec<u32> = (0..100).collect();
        SplitMix64::new(43).shuffle(&mut c);
        assert_ne!(a, c);
    }

    #[test]
    fn sample_bounds() {
        let items: Vec<u32> = (0..10).collect();
        let mut rng = SplitMix64::new(7);
        assert!(rng.sample(&items, 0).is_empty());
        assert_eq!(rng.sample(&items, 100).len(), 10);
        let s = rng.sample(&items, 4);
        assert_eq!(s.len(), 4);
        let mut t = s.clone();
        t.sort_unstable();
        t.dedup();
        assert_eq!(t.len(), 4, "sample must be without replacement");
    }

    #[test]
    fn derive_seed_is_key_dependent() {
        assert_eq!(derive_seed(9, "a"), derive_seed(9, "a"));
        assert_ne!(derive_seed(9, "a"), derive_seed(9, "b"));
        assert_ne!(derive_seed(9, "a"), derive_seed(10, "a"));
    }
}
