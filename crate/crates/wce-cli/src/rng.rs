//! Seedable PRNG with a fixed, documented stream so failure seeds reproduce
//! across implementations and languages.
//!
//! The generator is xorshift64* - 64-bit state, xorshift-multiply step -
//! initialized through one round of splitmix64:
//!
//! ```text
//! splitmix64(x): z  = x + 0x9E3779B97F4A7C15   (wrapping)
//!                z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
//!                z ^= z >> 27; z *= 0x94D049BB133111EB
//!                z ^= z >> 31
//! state0 = splitmix64(seed), or 0x9E3779B97F4A7C15 if that is zero
//! step:  x ^= x >> 12; x ^= x << 25; x ^= x >> 27
//!        output = x * 0x2545F4914F6CDD1D        (wrapping)
//! ```
//!
//! Derived values:
//! - `unit()` = (output >> 11) / 2^53, uniform in [0, 1)
//! - `range(a, b)` = a + (b - a) * unit()
//! - `below(n)` = output mod n
//!
//! Instance streams split from a root seed as
//! `instance_seed(root, k) = splitmix64(root + (k + 1) * 0x9E3779B97F4A7C15)`
//! (all arithmetic wrapping).

pub const GOLDEN_GAMMA: u64 = 0x9E3779B97F4A7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Seed for the k-th instance stream of a verification run.
pub fn instance_seed(root: u64, index: u64) -> u64 {
    splitmix64(root.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        let state = splitmix64(seed);
        Self {
            state: if state == 0 { GOLDEN_GAMMA } else { state },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in 0..n (modulo reduction, documented as such).
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }
}
