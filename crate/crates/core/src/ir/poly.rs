use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Caps, Mode, Monomial};
use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};

/// Explicit monomial-to-coefficient map. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    ring: Ring,
    mode: Mode,
    num_vars: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePolynomial {
    pub fn zero(ring: Ring, mode: Mode, num_vars: u32) -> Self {
        SparsePolynomial { ring, mode, num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: Ring, mode: Mode, num_vars: u32, c: Scalar) -> Self {
        let mut p = Self::zero(ring, mode, num_vars);
        p.add_term(Monomial::one(mode), c);
        p
    }

    pub fn var(ring: Ring, mode: Mode, num_vars: u32, i: u32) -> Self {
        let mut p = Self::zero(ring, mode, num_vars);
        p.add_term(Monomial::var(mode, i), ring.one());
        p
    }

    pub fn from_terms(
        ring: Ring,
        mode: Mode,
        num_vars: u32,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(ring, mode, num_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Same polynomial viewed in a space of `n` variables.
    pub fn with_num_vars(mut self, n: u32) -> Self {
        self.num_vars = n;
        self
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.mode))
    }

    pub fn support(&self) -> BTreeSet<Monomial> {
        self.terms.keys().cloned().collect()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: u32) -> u32 {
        self.terms.keys().map(|m| m.degree_in(var)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.mode(), self.mode);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        if self.mode != other.mode {
            return Err(Error::ModeMismatch(format!("{} vs {}", self.mode, other.mode)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        out.num_vars = self.num_vars.max(other.num_vars);
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-&self.ring.one())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.ring, self.mode, self.num_vars);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_truncated(other, u32::MAX)
    }

    /// Product with every term of degree above `max_degree` discarded.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.ring, self.mode, self.num_vars.max(other.num_vars));
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > max_degree {
                continue;
            }
            for (mb, cb) in &other.terms {
                if mb.degree().saturating_add(da) > max_degree {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow_truncated(&self, e: u32, max_degree: u32) -> Result<Self> {
        let mut acc = Self::constant(self.ring, self.mode, self.num_vars, self.ring.one());
        for _ in 0..e {
            acc = acc.mul_truncated(self, max_degree)?;
        }
        Ok(acc)
    }

    /// Drops every term of degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        self.filter(|m| m.degree() <= max_degree)
    }

    /// The degree-`d` homogeneous component.
    pub fn homogeneous_component(&self, d: u32) -> Self {
        self.filter(|m| m.degree() == d)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        let mut out = Self::zero(self.ring, self.mode, self.num_vars);
        out.terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        out
    }

    /// Writes `self = sum_i C_i * x_var^i` and returns `C_0, C_1, ...`
    /// (commutative only).
    pub fn split_by_var(&self, var: u32) -> Vec<Self> {
        let deg = self.degree_in(var) as usize;
        let mut parts = vec![Self::zero(self.ring, self.mode, self.num_vars); deg + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(var);
            parts[e as usize].add_term(rest, c.clone());
        }
        parts
    }

    /// Formal `j`-th partial derivative in `var` (commutative only).
    pub fn derivative(&self, var: u32, j: u32) -> Self {
        let mut out = Self::zero(self.ring, self.mode, self.num_vars);
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(var);
            if e < j {
                continue;
            }
            let mut factor = self.ring.one();
            for t in 0..j {
                factor = &factor * &self.ring.from_u64((e - t) as u64);
            }
            let mono = rest.mul(&Monomial::from_exponents([(var, e - j)]));
            out.add_term(mono, &factor * c);
        }
        out
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() < self.num_vars as usize {
            return Err(Error::ArityMismatch { expected: self.num_vars as usize, got: point.len() });
        }
        let one = self.ring.one();
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            acc = &acc + &(c * &m.evaluate(point, &one));
        }
        Ok(acc)
    }

    pub fn check_caps(&self, caps: Caps) -> Result<()> {
        if self.len() > caps.max_terms {
            return Err(Error::TermCapExceeded { cap: caps.max_terms });
        }
        let d = self.degree();
        if d > caps.max_degree {
            return Err(Error::DegreeCapExceeded { cap: caps.max_degree, degree: d as u64 });
        }
        Ok(())
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}
