//! Seedable randomness behind a fixed draw contract.
//!
//! One `SolverRng` drives a whole solver run; every stochastic choice
//! (shuffles, parent selection, q draws, roulette spins, cut points) pulls
//! from it in a documented order, so a run is fully reproducible from
//! (instance, config, seed) on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SolverRng(ChaCha8Rng);

impl SolverRng {
    pub fn seeded(seed: u64) -> Self {
        SolverRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform draw from [0, 1).
    #[inline]
    pub fn unit(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    /// Uniform index in 0..n. Sampled through u64 so the stream is
    /// identical on 32- and 64-bit targets.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.0.random_range(0..n as u64) as usize
    }

    /// Unbiased Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, slice: &mut [T]) {
        for i in (1..slice.len()).rev() {
            let j = self.index(i + 1);
            slice.swap(i, j);
        }
    }
}
