use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::{homog::homogeneous_prefix_trusted, require_commutative, zero_program};
use crate::coeffring::{coefficient_extractor, linalg, Scalar};
use crate::error::{Error, Result};
use crate::ir::{Algebra, Caps, Circuit, Leaf, Monomial, Op, Operand, ProgramBuilder, Slp, SparsePolynomial};

/// Extra registers used on top of the input program's.
pub const W_R: usize = 6;

/// Default cap on the number of steps of an assembled root program.
pub const DEFAULT_SIZE_BUDGET: usize = 5_000_000;

/// A polynomial `P(x_1..x_n, y)` (with `y` the last variable), a bound `r`
/// on its `y`-degree, a target degree `m`, and `y0` with `P(0, y0) = 0` and
/// `dP/dy(0, y0) != 0`. The coefficient polynomials `C_i` of
/// `P = sum C_i y^i` and the index set are derived at construction.
#[derive(Clone, Debug)]
pub struct RootProblem {
    p: Slp,
    r: u32,
    m: u32,
    y0: Scalar,
    coeffs: Vec<SparsePolynomial>,
    xi: Scalar,
    base_point: Vec<Scalar>,
    index_set: Vec<Vec<u32>>,
}

/// Values paired with their `d/dy`.
struct DualPoint<'a> {
    point: &'a [Scalar],
    y: u32,
}

impl Algebra for DualPoint<'_> {
    type Value = (Scalar, Scalar);

    fn var(&self, i: u32) -> Result<Self::Value> {
        let v = self.point[i as usize - 1].clone();
        let ring = v.ring();
        Ok((v, if i == self.y { ring.one() } else { ring.zero() }))
    }

    fn constant(&self, c: &Scalar) -> Result<Self::Value> {
        Ok((c.clone(), c.ring().zero()))
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok((&a.0 + &b.0, &a.1 + &b.1))
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok((&a.0 * &b.0, &(&a.0 * &b.1) + &(&a.1 * &b.0)))
    }
}

/// Truncated power series in `x` paired with their `d/dy`, with `y` bound to
/// a fixed series.
struct DualSeries<'a> {
    y: u32,
    y_value: &'a SparsePolynomial,
    m: u32,
}

impl Algebra for DualSeries<'_> {
    type Value = (SparsePolynomial, SparsePolynomial);

    fn var(&self, i: u32) -> Result<Self::Value> {
        let r = self.y_value.ring();
        let (mode, n) = (self.y_value.mode(), self.y_value.num_vars());
        Ok(if i == self.y {
            (self.y_value.clone(), SparsePolynomial::constant(r, mode, n, r.one()))
        } else {
            (SparsePolynomial::var(r, mode, n, i).truncate(self.m), SparsePolynomial::zero(r, mode, n))
        })
    }

    fn constant(&self, c: &Scalar) -> Result<Self::Value> {
        let (mode, n) = (self.y_value.mode(), self.y_value.num_vars());
        Ok((SparsePolynomial::constant(c.ring(), mode, n, c.clone()), SparsePolynomial::zero(c.ring(), mode, n)))
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        Ok((a.0.add(&b.0)?, a.1.add(&b.1)?))
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        let v = a.0.mul_truncated(&b.0, self.m)?;
        let d = a.0.mul_truncated(&b.1, self.m)?.add(&a.1.mul_truncated(&b.0, self.m)?)?;
        Ok((v, d))
    }
}

/// All `alpha` supported on `coords` with `|alpha| <= m`, as full vectors of
/// length `len`, in graded lexicographic order.
fn index_vectors(len: usize, coords: &[usize], m: u32) -> Vec<Vec<u32>> {
    fn rec(coords: &[usize], budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match coords.split_first() {
            None => out.push(cur.clone()),
            Some((&i, rest)) => {
                for e in 0..=budget {
                    cur[i] = e;
                    rec(rest, budget - e, cur, out);
                }
                cur[i] = 0;
            }
        }
    }
    let mut out = Vec::new();
    rec(coords, m, &mut vec![0; len], &mut out);
    out.sort_by_key(|a| (a.iter().sum::<u32>(), a.clone()));
    out
}

impl RootProblem {
    pub fn new(p: Slp, r: u32, m: u32, y0: Scalar) -> Result<Self> {
        Self::with_caps(p, r, m, y0, Caps::default())
    }

    pub fn with_caps(p: Slp, r: u32, m: u32, y0: Scalar, caps: Caps) -> Result<Self> {
        require_commutative(&p, "root finding")?;
        y0.same_ring(&p.ring().zero())?;
        let ring = p.ring();
        let y = p.num_vars();
        if y == 0 {
            return Err(Error::InvalidParameter("the program needs a y variable".into()));
        }
        let mut point = vec![ring.zero(); y as usize];
        point[y as usize - 1] = y0.clone();
        let (value, xi) = p.interpret(&DualPoint { point: &point, y })?;
        if !value.is_zero() {
            return Err(Error::NotARoot);
        }
        if xi.is_zero() {
            return Err(Error::DegenerateRoot);
        }
        let mut coeffs = p.expand(caps)?.split_by_var(y);
        if coeffs.len() > r as usize + 1 {
            return Err(Error::DegreeBoundViolated {
                bound: r as u64,
                message: format!("P has degree {} in y", coeffs.len() - 1),
            });
        }
        coeffs.resize(r as usize + 1, SparsePolynomial::zero(ring, p.mode(), y));
        let base_point: Vec<Scalar> = coeffs.iter().map(SparsePolynomial::constant_term).collect();
        let effective: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i].degree() > 0).collect();
        let index_set = index_vectors(coeffs.len(), &effective, m);
        Ok(RootProblem { p, r, m, y0, coeffs, xi, base_point, index_set })
    }

    pub fn program(&self) -> &Slp {
        &self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn y0(&self) -> &Scalar {
        &self.y0
    }

    /// `C_0, ..., C_r`.
    pub fn coefficients(&self) -> &[SparsePolynomial] {
        &self.coeffs
    }

    /// `dP/dy(0, y0)`.
    pub fn xi(&self) -> &Scalar {
        &self.xi
    }

    /// `(C_0(0), ..., C_r(0))`.
    pub fn base_point(&self) -> &[Scalar] {
        &self.base_point
    }

    /// Exponent vectors `alpha` with `|alpha| <= m`, restricted to the
    /// coordinates whose `C_i` is not constant (the others contribute
    /// `(C_i - C_i(0))^alpha_i = 0` anyway).
    pub fn index_set(&self) -> &[Vec<u32>] {
        &self.index_set
    }

    /// `(m + r)^r`.
    pub fn index_bound(&self) -> BigUint {
        BigUint::from(self.m + self.r).pow(self.r)
    }
}

/// `1 / a` modulo degree `m + 1`, by the geometric series.
fn series_inverse(a: &SparsePolynomial, m: u32) -> Result<SparsePolynomial> {
    let a0 = a.constant_term();
    let inv0 = a0.inverse().ok_or(Error::DegenerateRoot)?;
    let (ring, mode, n) = (a.ring(), a.mode(), a.num_vars());
    let one = SparsePolynomial::constant(ring, mode, n, ring.one());
    let e = one.sub(&a.scale(&inv0))?;
    let mut term = one.clone();
    let mut sum = one;
    for _ in 0..m {
        term = term.mul_truncated(&e, m)?;
        sum = sum.add(&term)?;
    }
    Ok(sum.scale(&inv0))
}

/// The root `f` with `f(0) = y0` and `P(x, f) = 0`, truncated at degree `m`,
/// by Newton iteration on truncated power series.
pub fn newton_series_root(rp: &RootProblem) -> Result<SparsePolynomial> {
    let p = &rp.p;
    let ring = p.ring();
    ring.require_characteristic_above(rp.m as u64)?;
    let y = p.num_vars();
    let m = rp.m;
    let mut f = SparsePolynomial::constant(ring, p.mode(), y, rp.y0.clone());
    let rounds = (u32::BITS - m.leading_zeros()) as usize;
    for _ in 0..rounds {
        let (v, dv) = p.interpret(&DualSeries { y, y_value: &f, m })?;
        let step = v.mul_truncated(&series_inverse(&dv, m)?, m)?;
        f = f.sub(&step)?;
    }
    let (v, _) = p.interpret(&DualSeries { y, y_value: &f, m })?;
    if !v.is_zero() {
        return Err(Error::NoConvergence(rounds));
    }
    Ok(f)
}

/// Scalars `Q_alpha` with `H_{<=m}(sum Q_alpha prod (C_i - C_i(0))^alpha_i)`
/// equal to the Newton root. Entries with `Q_alpha = 0` are dropped.
pub fn root_coefficients(rp: &RootProblem) -> Result<Vec<(Vec<u32>, Scalar)>> {
    let ring = rp.p.ring();
    let m = rp.m;
    let f = newton_series_root(rp)?;
    let shifted: Vec<SparsePolynomial> = rp
        .coeffs
        .iter()
        .zip(&rp.base_point)
        .map(|(c, b)| c.sub(&SparsePolynomial::constant(ring, c.mode(), c.num_vars(), b.clone())))
        .collect::<Result<_>>()?;
    let one = SparsePolynomial::constant(ring, f.mode(), f.num_vars(), ring.one());
    let mut powers: Vec<Vec<SparsePolynomial>> = vec![vec![one.clone()]; shifted.len()];
    let mut columns = Vec::with_capacity(rp.index_set.len());
    for alpha in &rp.index_set {
        let mut g = one.clone();
        for (i, &e) in alpha.iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = powers[i].last().expect("power 0").mul_truncated(&shifted[i], m)?;
                powers[i].push(next);
            }
            if e > 0 {
                g = g.mul_truncated(&powers[i][e as usize], m)?;
            }
        }
        columns.push(g);
    }
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for g in columns.iter().chain(std::iter::once(&f)) {
        for mono in g.terms().keys() {
            let k = rows.len();
            rows.entry(mono.clone()).or_insert(k);
        }
    }
    let mut matrix = vec![vec![ring.zero(); columns.len()]; rows.len()];
    for (col, g) in columns.iter().enumerate() {
        for (mono, c) in g.terms() {
            matrix[rows[mono]][col] = c.clone();
        }
    }
    let mut rhs = vec![ring.zero(); rows.len()];
    for (mono, c) in f.terms() {
        rhs[rows[mono]] = c.clone();
    }
    let q = linalg::solve(ring, &matrix, &rhs).ok_or(Error::UnsolvableSystem)?;
    Ok(rp.index_set.iter().cloned().zip(q).filter(|(_, s)| !s.is_zero()).collect())
}

/// [`root_circuit_with_budget`] with [`DEFAULT_SIZE_BUDGET`].
pub fn root_circuit(rp: &RootProblem) -> Result<Slp> {
    root_circuit_with_budget(rp, DEFAULT_SIZE_BUDGET)
}

/// Register program for `H_{<=m}(sum_alpha Q_alpha prod_i (C_i - C_i(0))^alpha_i)`.
///
/// Each `C_i` is recomputed from `P` by interpolation in `y` at `0..=r`
/// into one accumulator register, shifted, and multiplied `alpha_i` times
/// into a product register that starts at `Q_alpha`; a third register sums
/// over `alpha`. The outer `H_{<=m}` adds two more registers.
pub fn root_circuit_with_budget(rp: &RootProblem, budget: usize) -> Result<Slp> {
    let p = &rp.p;
    let ring = p.ring();
    ring.require_characteristic_above(rp.r.max(rp.m) as u64)?;
    let q = root_coefficients(rp)?;
    let y = p.num_vars();
    let points = ring.distinct_points(rp.r as u64 + 1)?;
    let rows: Vec<Vec<Scalar>> = (0..=rp.r as usize).map(|i| coefficient_extractor(&points, i)).collect::<Result<_>>()?;

    let w = p.registers();
    let (acc, pi, sum) = (w, w + 1, w + 2);
    let out = p.output();
    let konst = |c: Scalar| Operand::Leaf(Leaf::Const(c));
    let mut b = ProgramBuilder::new();
    b.load(sum, Leaf::Const(ring.zero()));
    let mut degree_bound = 0u64;
    for (alpha, q_alpha) in &q {
        b.load(pi, Leaf::Const(q_alpha.clone()));
        let mut deg = 0u64;
        for (i, &e) in alpha.iter().enumerate() {
            if e == 0 {
                continue;
            }
            deg += e as u64 * rp.coeffs[i].degree() as u64;
            let mut first = true;
            for (l, z) in points.iter().enumerate() {
                let a = &rows[i][l];
                if a.is_zero() {
                    continue;
                }
                b.inline(p, |leaf| match leaf {
                    Leaf::Var(v) if *v == y => Leaf::Const(z.clone()),
                    other => other.clone(),
                });
                if first {
                    b.apply(acc, Op::Mul, Operand::Reg(out), konst(a.clone()));
                    first = false;
                } else {
                    b.apply(out, Op::Mul, Operand::Reg(out), konst(a.clone()));
                    b.apply(acc, Op::Add, Operand::Reg(acc), Operand::Reg(out));
                }
            }
            b.apply(acc, Op::Add, Operand::Reg(acc), konst(-&rp.base_point[i]));
            for _ in 0..e {
                b.apply(pi, Op::Mul, Operand::Reg(pi), Operand::Reg(acc));
            }
        }
        b.apply(sum, Op::Add, Operand::Reg(sum), Operand::Reg(pi));
        degree_bound = degree_bound.max(deg);
        if b.len() > budget {
            return Err(Error::SizeBudgetExceeded { size: b.len(), budget });
        }
    }
    if q.is_empty() {
        return Ok(zero_program(p));
    }
    let inner = b.finish(ring, p.mode(), y, sum)?;
    if !ring.has_elements(degree_bound + 1) {
        return Err(Error::FieldTooSmall(format!(
            "the degree {degree_bound} combination needs {} interpolation points",
            degree_bound + 1
        )));
    }
    let bound = u32::try_from(degree_bound).map_err(|_| Error::InvalidParameter("degree bound overflow".into()))?;
    let prog = homogeneous_prefix_trusted(&inner, bound, rp.m.min(bound))?;
    if prog.len() > budget {
        return Err(Error::SizeBudgetExceeded { size: prog.len(), budget });
    }
    Ok(prog)
}
