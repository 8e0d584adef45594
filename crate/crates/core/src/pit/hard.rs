use num_bigint::BigUint;
use rayon::prelude::*;

use super::{nw_design, Verdict};
use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::ir::{Circuit, Mode};

/// Default cap on the number of grid points `nw_pit` will evaluate.
pub const DEFAULT_GRID_BUDGET: u64 = 1 << 20;

/// Largest `m` accepted by `nw_pit` (the family is evaluated by summing over
/// all `2^m` subsets).
const MAX_M: u32 = 16;

/// Explicit multilinear family `P_m = sum_T coeff(m, T) prod_(i in T) y_i`,
/// with `T` given as a bit mask over `y_1..y_m`.
///
/// The testers only use explicitness; whether a family is actually hard
/// for the circuits being tested is an assumption this crate cannot check.
#[derive(Clone, Copy, Debug)]
pub struct HardFamily {
    pub name: &'static str,
    pub rule: fn(u32, u64) -> u64,
}

fn mix(mask: u64) -> u64 {
    let x = mask.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (mask >> 7);
    x.wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

fn desk_rule(_m: u32, mask: u64) -> u64 {
    1 + (mix(mask).count_ones() as u64 & 1)
}

fn index_sum(_m: u32, mask: u64) -> u64 {
    1 + (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).sum::<u64>()
}

impl HardFamily {
    /// Coefficient `1 + parity(popcount(mix(T)))`.
    pub fn desk_rule() -> Self {
        HardFamily { name: "desk-rule", rule: desk_rule }
    }

    /// Coefficient `1 + sum_(i in T) i`.
    pub fn index_sum() -> Self {
        HardFamily { name: "index-sum", rule: index_sum }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        [Self::desk_rule(), Self::index_sum()].into_iter().find(|f| f.name == name)
    }

    pub fn coefficient(&self, ring: Ring, m: u32, mask: u64) -> Scalar {
        ring.from_u64((self.rule)(m, mask))
    }

    fn table(&self, ring: Ring, m: u32) -> Vec<Scalar> {
        (0..1u64 << m).map(|mask| self.coefficient(ring, m, mask)).collect()
    }

    /// `P_m(ys)`.
    pub fn evaluate(&self, ring: Ring, ys: &[Scalar]) -> Scalar {
        eval_with(&self.table(ring, ys.len() as u32), ring, ys)
    }
}

fn eval_with(table: &[Scalar], ring: Ring, ys: &[Scalar]) -> Scalar {
    let mut prods = Vec::with_capacity(table.len());
    prods.push(ring.one());
    let mut sum = table[0].clone();
    for mask in 1..table.len() {
        let p = &prods[mask & (mask - 1)] * &ys[mask.trailing_zeros() as usize];
        sum = &sum + &(&table[mask] * &p);
        prods.push(p);
    }
    sum
}

#[derive(Clone, Copy, Debug)]
pub struct NwPitOptions {
    pub m: u32,
    /// Size of the grid alphabet `{0, ..., B - 1}`; defaults to
    /// `deg(c) * m + 1`, and must exceed `deg(c) * m`.
    pub sample_size: Option<u64>,
    pub grid_budget: u64,
}

impl NwPitOptions {
    pub fn new(m: u32) -> Self {
        NwPitOptions { m, sample_size: None, grid_budget: DEFAULT_GRID_BUDGET }
    }
}

/// Deterministic zero test: substitutes `P_m` restricted to the sets of a
/// design for the inputs of `c` and evaluates the result over the full grid
/// of the design elements that occur. Reports the input of `c` at the first
/// nonvanishing grid point.
pub fn nw_pit<C: Circuit + Sync>(c: &C, family: &HardFamily, opts: NwPitOptions) -> Result<Verdict> {
    if c.mode() != Mode::Commutative {
        return Err(Error::ModeMismatch("the design-based tester needs a commutative circuit".into()));
    }
    let m = opts.m;
    if m == 0 || m > MAX_M {
        return Err(Error::InvalidParameter(format!("m = {m}, need 1 <= m <= {MAX_M}")));
    }
    let ring = c.ring();
    let n = c.num_vars() as usize;
    if n == 0 {
        let v = c.evaluate(&[])?;
        return Ok(if v.is_zero() { Verdict::Zero } else { Verdict::NonZero(vec![]) });
    }
    let individual = (1..=n as u32).map(|i| c.syntactic_degree_in(i)).max().unwrap_or(0);
    ring.require_characteristic_above(individual)?;
    let bound = c.syntactic_degree().saturating_mul(m as u64);
    let size = opts.sample_size.unwrap_or(bound.saturating_add(1));
    if size <= bound {
        return Err(Error::InvalidParameter(format!("sample size {size} must exceed the degree bound {bound}")));
    }
    if !ring.has_elements(size) {
        return Err(Error::FieldTooSmall(format!("sample set of {size} points does not fit in {ring}")));
    }

    let design = nw_design(n, m as usize);
    let mut used: Vec<u64> = design.sets.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let positions: Vec<Vec<usize>> =
        design.sets.iter().map(|s| s.iter().map(|e| used.binary_search(e).expect("element is used")).collect()).collect();
    let points = BigUint::from(size).pow(used.len() as u32);
    if points > BigUint::from(opts.grid_budget) {
        return Err(Error::GridTooLarge { points: points.to_string(), budget: opts.grid_budget });
    }
    let total: u64 = points.try_into().expect("within budget");
    let table = family.table(ring, m);
    let alphabet = ring.distinct_points(size)?;

    let found = (0..total).into_par_iter().find_map_first(|idx| {
        let mut rest = idx;
        let y: Vec<&Scalar> = used
            .iter()
            .map(|_| {
                let v = &alphabet[(rest % size) as usize];
                rest /= size;
                v
            })
            .collect();
        let x: Vec<Scalar> = positions
            .iter()
            .map(|pos| {
                let ys: Vec<Scalar> = pos.iter().map(|&p| y[p].clone()).collect();
                eval_with(&table, ring, &ys)
            })
            .collect();
        match c.evaluate(&x) {
            Ok(v) if v.is_zero() => None,
            Ok(_) => Some(Ok(x)),
            Err(e) => Some(Err(e)),
        }
    });
    match found {
        None => Ok(Verdict::Zero),
        Some(Ok(w)) => Ok(Verdict::NonZero(w)),
        Some(Err(e)) => Err(e),
    }
}
