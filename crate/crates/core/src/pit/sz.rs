use rand::Rng;
use rayon::prelude::*;

use super::Verdict;
use crate::error::{Error, Result};
use crate::ir::{Circuit, Mode};
use crate::rng::SeedStream;

#[derive(Clone, Copy, Debug)]
pub struct SzOptions {
    pub trials: usize,
    /// Defaults to the syntactic degree.
    pub degree_bound: Option<u64>,
    /// Size `B` of the sample set `{0, ..., B - 1}`; defaults to
    /// `max(2 * degree_bound, 2)`.
    pub sample_size: Option<u64>,
    pub seed: u64,
}

pub fn schwartz_zippel<C: Circuit + Sync>(c: &C, trials: usize, degree_bound: u64, seed: u64) -> Result<Verdict> {
    schwartz_zippel_with(c, SzOptions { trials, degree_bound: Some(degree_bound), sample_size: None, seed })
}

/// Randomized zero test. Trial `t` samples a uniform point of `S^n` from
/// stream `t` of the seed; the first failing trial (by index) supplies the
/// witness, so the verdict does not depend on thread scheduling.
pub fn schwartz_zippel_with<C: Circuit + Sync>(c: &C, opts: SzOptions) -> Result<Verdict> {
    if c.mode() != Mode::Commutative {
        return Err(Error::ModeMismatch("Schwartz-Zippel needs a commutative circuit".into()));
    }
    let ring = c.ring();
    let deg = opts.degree_bound.unwrap_or_else(|| c.syntactic_degree());
    let size = opts.sample_size.unwrap_or_else(|| deg.saturating_mul(2).max(2));
    if !ring.has_elements(size) {
        return Err(Error::FieldTooSmall(format!("sample set of {size} points does not fit in {ring}")));
    }
    let seeds = SeedStream::new(opts.seed);
    let n = c.num_vars() as usize;
    let found = (0..opts.trials).into_par_iter().find_map_first(|t| {
        let mut rng = seeds.rng(t as u64);
        let point: Vec<_> = (0..n).map(|_| ring.from_u64(rng.gen_range(0..size))).collect();
        match c.evaluate(&point) {
            Ok(v) if v.is_zero() => None,
            Ok(_) => Some(Ok(point)),
            Err(e) => Some(Err(e)),
        }
    });
    match found {
        None => Ok(Verdict::Zero),
        Some(Ok(w)) => Ok(Verdict::NonZero(w)),
        Some(Err(e)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Ring;
    use crate::ir::{CircuitBuilder, LayeredCircuit};

    /// `x1 + (-1) x1`.
    fn cancel(ring: Ring) -> LayeredCircuit {
        let mut b = CircuitBuilder::new(ring, Mode::Commutative, 1);
        let (x, m, one) = (b.var(1), b.constant(ring.from_i64(-1)), b.constant(ring.one()));
        let neg = b.mul(2, x, m);
        let keep = b.mul(2, x, one);
        let z = b.add(3, keep, neg);
        b.finish("cancel", z).unwrap()
    }

    #[test]
    fn cancellation_is_zero() {
        let ring = Ring::default_prime();
        let c = cancel(ring);
        for seed in 0..5 {
            assert_eq!(schwartz_zippel(&c, 20, 2, seed).unwrap(), Verdict::Zero);
        }
    }

    #[test]
    fn product_is_nonzero() {
        let ring = Ring::default_prime();
        let mut b = CircuitBuilder::new(ring, Mode::Commutative, 2);
        let (x, y) = (b.var(1), b.var(2));
        let p = b.mul(2, x, y);
        let c = b.finish("xy", p).unwrap();
        let Verdict::NonZero(w) = schwartz_zippel(&c, 20, 2, 1).unwrap() else { panic!("missed x1*x2") };
        assert!(!c.evaluate(&w).unwrap().is_zero());
        assert_eq!(schwartz_zippel(&c, 20, 2, 1).unwrap(), Verdict::NonZero(w));
    }

    #[test]
    fn small_field() {
        let ring = Ring::prime(3).unwrap();
        let c = cancel(ring);
        assert!(matches!(schwartz_zippel(&c, 1, 2, 0), Err(Error::FieldTooSmall(_))));
    }
}
