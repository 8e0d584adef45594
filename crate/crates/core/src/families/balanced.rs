use num_bigint::BigUint;

use crate::coeffring::{coefficient_extractor, Ring, Scalar};
use crate::error::{Error, Result};
use crate::ir::{Abp, AbpEdge, LinearForm, Leaf, Mode, Op, Operand, ProgramBuilder, Slp};

/// ABP for the sum of all words of length `2n` with `n` letters `x1` and `n`
/// letters `x2`. Vertex `(t, b)` records position `t` and the excess of `x1`
/// over `x2`; there are `(n + 1)^2` vertices.
pub fn build_e_abp(n: u32, ring: Ring) -> Result<Abp> {
    if n == 0 {
        return Err(Error::InvalidParameter("balanced words need n >= 1".into()));
    }
    let len = 2 * n;
    let reach = |t: u32| t.min(len - t) as i64;
    let mut ids = std::collections::HashMap::new();
    let mut vertices = Vec::new();
    for t in 0..=len {
        let h = reach(t);
        for b in (-h..=h).step_by(2) {
            let id = vertices.len() as u32 + 1;
            ids.insert((t, b), id);
            vertices.push((id, t));
        }
    }
    let mut edges = Vec::new();
    for t in 0..len {
        let h = reach(t);
        for b in (-h..=h).step_by(2) {
            for (step, var) in [(1i64, 1u32), (-1, 2)] {
                if let Some(&to) = ids.get(&(t + 1, b + step)) {
                    edges.push(AbpEdge { from: ids[&(t, b)], to, label: LinearForm::var(ring, var) });
                }
            }
        }
    }
    Abp::new(format!("E_{n}"), ring, Mode::Noncommutative, 2, vertices, edges, ids[&(0, 0)], ids[&(len, 0)])
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Parameters of the interpolation construction of the balanced-words
/// polynomial from `g(z) = (x1 z^(N+1) + x2 z + 1)^N`.
#[derive(Clone, Debug)]
pub struct BenOrParams {
    pub n: u32,
    pub k: u32,
    pub big_n: u64,
    pub heavy_exponent: u64,
    pub target_exponent: u64,
    pub multiplicity: BigUint,
    pub points: Vec<Scalar>,
    pub weights: Vec<Scalar>,
}

impl BenOrParams {
    /// `k` is the least integer with `n <= 2^k` and `N = 2^(k+1)`. The
    /// weights extract the coefficient of `z^((N+1) n + n)` from the values
    /// of `g` at `N (N+1) + 1` points, divided by `binomial(N, 2n)`.
    pub fn new(n: u32, ring: Ring) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("balanced words need n >= 1".into()));
        }
        let k = n.next_power_of_two().trailing_zeros();
        let big_n = 1u64 << (k + 1);
        let heavy = big_n + 1;
        let target = heavy * n as u64 + n as u64;
        let multiplicity = binomial(big_n, 2 * n as u64);
        let count = big_n * heavy + 1;
        if !ring.has_elements(count) {
            return Err(Error::FieldTooSmall(format!("{ring} has fewer than {count} points")));
        }
        let mult = ring.from_bigint(&multiplicity.clone().into());
        let inv = mult.inverse().ok_or_else(|| Error::BadCharacteristic {
            characteristic: ring.characteristic(),
            value: multiplicity.to_string(),
        })?;
        let points = ring.distinct_points(count)?;
        let weights = coefficient_extractor(&points, target as usize)?.iter().map(|b| b * &inv).collect();
        Ok(BenOrParams { n, k, big_n, heavy_exponent: heavy, target_exponent: target, multiplicity, points, weights })
    }
}

/// Two registers: the first builds `g(z_i)` by repeated squaring, the second
/// accumulates `beta_i g(z_i)`.
pub fn build_e_width2(params: &BenOrParams, ring: Ring) -> Result<Slp> {
    let (l, acc) = (0, 1);
    let c = |s: Scalar| Operand::Leaf(Leaf::Const(s));
    let x = |i| Operand::Leaf(Leaf::Var(i));
    let r = Operand::Reg;
    let mut b = ProgramBuilder::new();
    let mut first = true;
    for (z, beta) in params.points.iter().zip(&params.weights) {
        if beta.is_zero() {
            continue;
        }
        b.apply(l, Op::Mul, x(1), c(z.pow(params.big_n)));
        b.apply(l, Op::Add, r(l), x(2));
        b.apply(l, Op::Mul, r(l), c(z.clone()));
        b.apply(l, Op::Add, r(l), c(ring.one()));
        for _ in 0..=params.k {
            b.apply(l, Op::Mul, r(l), r(l));
        }
        if first {
            b.apply(acc, Op::Mul, r(l), c(beta.clone()));
            first = false;
        } else {
            b.apply(l, Op::Mul, r(l), c(beta.clone()));
            b.apply(acc, Op::Add, r(acc), r(l));
        }
    }
    if first {
        b.load(acc, Leaf::Const(ring.zero()));
    }
    b.finish(ring, Mode::Noncommutative, 2, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Caps, Circuit};

    #[test]
    fn abp_words() {
        let ring = Ring::Rational;
        let a = build_e_abp(1, ring).unwrap();
        assert_eq!(a.expand(Caps::default()).unwrap().to_string(), "x1*x2 + x2*x1");
        for (n, words) in [(2, 6), (3, 20)] {
            let a = build_e_abp(n, ring).unwrap();
            assert_eq!(a.vertices().len(), ((n + 1) * (n + 1)) as usize);
            let e = a.expand(Caps::default()).unwrap();
            assert_eq!(e.len(), words);
            assert!(e.terms().values().all(|c| c.is_one()));
        }
    }

    #[test]
    fn parameters() {
        let ring = Ring::default_prime();
        let p = BenOrParams::new(2, ring).unwrap();
        assert_eq!((p.k, p.big_n, p.heavy_exponent, p.target_exponent), (1, 4, 5, 12));
        assert_eq!(p.multiplicity, BigUint::from(1u32));
        let p = BenOrParams::new(3, ring).unwrap();
        assert_eq!((p.k, p.big_n), (2, 8));
        assert_eq!(p.multiplicity, BigUint::from(28u32));
        assert_eq!(BenOrParams::new(1, ring).unwrap().k, 0);
    }

    #[test]
    fn width2_matches_abp() {
        let ring = Ring::default_prime();
        for n in 1..=3 {
            let p = BenOrParams::new(n, ring).unwrap();
            let e = build_e_width2(&p, ring).unwrap();
            assert_eq!(e.registers(), 2);
            assert_eq!(e.expand(Caps::default()).unwrap(), build_e_abp(n, ring).unwrap().expand(Caps::default()).unwrap());
        }
    }

    #[test]
    fn field_checks() {
        assert!(matches!(BenOrParams::new(2, Ring::prime(7).unwrap()), Err(Error::FieldTooSmall(_))));
        // binomial(8, 6) = 28 vanishes mod 7; N(N+1)+1 = 73 fits in F_73 only
        assert!(matches!(BenOrParams::new(3, Ring::prime(7).unwrap()), Err(Error::FieldTooSmall(_))));
        assert!(matches!(BenOrParams::new(3, Ring::prime(1_000_003).unwrap()), Ok(_)));
    }
}
