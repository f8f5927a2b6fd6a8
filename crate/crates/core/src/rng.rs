//! Seedable pseudo-random stream shared by every game.
//!
//! The generator is SplitMix64: the state advances by the golden-ratio
//! increment `0x9E37_79B9_7F4A_7C15` and each output is the state passed
//! through the finalizer
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58_476D_1CE4_E5B9
//! z = (z ^ (z >> 27)) * 0x94D0_49BB_1331_11EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! with wrapping 64-bit arithmetic. Uniform reals take the top 53 bits of
//! one output; bounded integers use rejection sampling on whole outputs.
//! Any port that follows these three rules reproduces the stream bit for bit.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Raw internal state, for hashing and snapshots.
    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform integer in `[0, k)`.
    ///
    /// Outputs below `2^64 mod k` are rejected so that every residue has the
    /// same number of preimages.
    ///
    /// # Panics
    /// If `k == 0`.
    pub fn next_below(&mut self, k: u64) -> u64 {
        assert!(k > 0, "next_below requires a non-empty range");
        let threshold = k.wrapping_neg() % k;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % k;
            }
        }
    }

    /// Uniformly chosen element, or `None` for an empty slice.
    pub fn next_choice<'a, T>(&mut self, items: &'a [T]) -> Option<&'a T> {
        if items.is_empty() {
            return None;
        }
        let i = self.next_below(items.len() as u64) as usize;
        Some(&items[i])
    }

    /// Bernoulli draw with success probability `p`.
    pub fn next_bool(&mut self, p: f64) -> bool {
        self.next_uniform() < p
    }
}

/// SplitMix64 output finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
