//! Seeded randomness. Every randomized code path takes a [`SeedStream`] and
//! asks it for a generator on a numbered stream, so sub-tasks (trials, grid
//! chunks, per-k tests) are independent of scheduling order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffring::{Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// ChaCha8 keyed by the seed, positioned on its own stream.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// A derived seed stream for a named sub-task.
    pub fn child(&self, stream: u64) -> SeedStream {
        SeedStream { seed: self.rng(stream).gen() }
    }
}

/// Uniform element of the ring: a uniform residue for `F_p`, a uniform
/// integer in `[-2^20, 2^20]` for the rationals.
pub fn random_scalar<R: Rng>(ring: Ring, rng: &mut R) -> Scalar {
    match ring {
        Ring::Prime(p) => ring.from_u64(rng.gen_range(0..p)),
        Ring::Rational => ring.from_i64(rng.gen_range(-(1 << 20)..=(1 << 20))),
    }
}

pub fn random_point<R: Rng>(ring: Ring, n: usize, rng: &mut R) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(ring, rng)).collect()
}
