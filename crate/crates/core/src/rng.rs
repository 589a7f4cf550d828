//! Pinned pseudo-random source: splitmix64 feeding Fisher–Yates.
//!
//! The exact generator is part of the instance format contract, so it is
//! spelled out here rather than borrowed from a crate whose stream may
//! change between releases.

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

    /// Uniform-ish value in `0..bound` by plain modulo reduction.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    /// In-place Fisher–Yates: for `i` from the top down, swap with `below(i + 1)`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        self.shuffle(&mut p);
        p
    }
}

/// Mixes a base seed with a list of integers into an independent seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut rng = SplitMix64::new(base);
    let mut acc = rng.next_u64();
    for &p in parts {
        rng = SplitMix64::new(acc ^ p.wrapping_mul(0xD6E8_FEB8_6659_FD93));
        acc = rng.next_u64();
    }
    acc
}
