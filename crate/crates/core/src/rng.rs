//! Counter-based randomness.
//!
//! A master seed keys a ChaCha8 generator; every consumer reads its own
//! ChaCha stream, chosen from `(purpose, index)`. Results never depend on
//! how many threads run trials or in what order.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    /// Base relator set of a trial.
    Relators = 0,
    /// Extra random relators (`R_εp`) of a boost trial.
    Sprinkle = 1,
    /// Bootstrap resampling.
    Bootstrap = 2,
    /// Choice of planted pairs and other per-experiment auxiliaries.
    Auxiliary = 3,
}

pub fn stream_id(purpose: Purpose, index: u64) -> u64 {
    debug_assert!(index < 1 << 56);
    ((purpose as u64) << 56) | index
}

pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, purpose: Purpose, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id(purpose, index));
        Stream { rng }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound` (rejection sampling, no modulo bias).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.rng.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}
