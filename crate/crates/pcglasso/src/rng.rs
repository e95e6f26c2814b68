//! Deterministic random streams.
//!
//! Everything random in the crate (Gaussian sampling, sweep-order shuffling,
//! scenario construction) draws from a ChaCha20 stream seeded explicitly, with
//! normals produced by the Box–Muller transform. Both algorithms are fixed, so
//! a given seed reproduces identical output across platforms and builds.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

pub(crate) struct DetRng {
    rng: ChaCha20Rng,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng { rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    /// Uniform draw in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * ((self.rng.next_u64() >> 11) as f64) * (1.0 / 9007199254740992.0)
    }

    /// One standard-normal pair via Box–Muller.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / 9007199254740992.0);
        let u2 = ((self.rng.next_u64() >> 11) as f64) * (1.0 / 9007199254740992.0);
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u2;
        (r * phi.cos(), r * phi.sin())
    }

    /// Fill `out` with standard normals, drawing whole Box–Muller pairs and
    /// discarding the unused half on odd lengths.
    pub fn fill_normals(&mut self, out: &mut [f64]) {
        let mut k = 0;
        while k < out.len() {
            let (a, b) = self.normal_pair();
            out[k] = a;
            k += 1;
            if k < out.len() {
                out[k] = b;
                k += 1;
            }
        }
    }

    /// Unbiased integer draw in [0, bound) by rejection.
    pub fn index(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        let bound = bound as u64;
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let x = self.rng.next_u64();
            if x <= zone {
                return (x % bound) as usize;
            }
        }
    }

    /// In-place Fisher–Yates shuffle.
    pub fn shuffle<U>(&mut self, items: &mut [U]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    pub fn sign(&mut self) -> f64 {
        if self.rng.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
