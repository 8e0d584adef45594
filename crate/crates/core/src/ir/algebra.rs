use super::{Caps, Mode, SparsePolynomial};
use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};

/// A semantic domain for circuits: every IR form is interpreted by folding
/// its gates through one of these.
pub trait Algebra {
    type Value: Clone;
    fn var(&self, i: u32) -> Result<Self::Value>;
    fn constant(&self, c: &Scalar) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
}

/// Evaluation at a point.
pub struct PointEval<'a> {
    point: &'a [Scalar],
}

impl<'a> PointEval<'a> {
    pub fn new(point: &'a [Scalar]) -> Self {
        PointEval { point }
    }
}

impl Algebra for PointEval<'_> {
    type Value = Scalar;

    fn var(&self, i: u32) -> Result<Scalar> {
        self.point
            .get(i as usize - 1)
            .cloned()
            .ok_or(Error::ArityMismatch { expected: i as usize, got: self.point.len() })
    }

    fn constant(&self, c: &Scalar) -> Result<Scalar> {
        Ok(c.clone())
    }

    fn add(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        a.same_ring(b)?;
        Ok(a + b)
    }

    fn mul(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        a.same_ring(b)?;
        Ok(a * b)
    }
}

/// Exact symbolic expansion under resource caps.
pub struct Expansion {
    ring: Ring,
    mode: Mode,
    num_vars: u32,
    caps: Caps,
}

impl Expansion {
    pub fn new(ring: Ring, mode: Mode, num_vars: u32, caps: Caps) -> Self {
        Expansion { ring, mode, num_vars, caps }
    }
}

impl Algebra for Expansion {
    type Value = SparsePolynomial;

    fn var(&self, i: u32) -> Result<SparsePolynomial> {
        let p = SparsePolynomial::var(self.ring, self.mode, self.num_vars, i);
        p.check_caps(self.caps)?;
        Ok(p)
    }

    fn constant(&self, c: &Scalar) -> Result<SparsePolynomial> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), c.ring().to_string()));
        }
        Ok(SparsePolynomial::constant(self.ring, self.mode, self.num_vars, c.clone()))
    }

    fn add(&self, a: &SparsePolynomial, b: &SparsePolynomial) -> Result<SparsePolynomial> {
        let s = a.add(b)?;
        s.check_caps(self.caps)?;
        Ok(s)
    }

    fn mul(&self, a: &SparsePolynomial, b: &SparsePolynomial) -> Result<SparsePolynomial> {
        // Polynomial rings over a field (commutative or free) have no zero
        // divisors, so the degree check can precede the product.
        if !a.is_zero() && !b.is_zero() {
            let d = a.degree() as u64 + b.degree() as u64;
            if d > self.caps.max_degree as u64 {
                return Err(Error::DegreeCapExceeded { cap: self.caps.max_degree, degree: d });
            }
        }
        let p = a.mul(b)?;
        p.check_caps(self.caps)?;
        Ok(p)
    }
}

/// Syntactic degree: total, or in a single variable. Constants have degree
/// 0 regardless of value, so the result is an upper bound.
pub struct DegreeAlgebra {
    var: Option<u32>,
}

impl DegreeAlgebra {
    pub fn total() -> Self {
        DegreeAlgebra { var: None }
    }

    pub fn in_var(var: u32) -> Self {
        DegreeAlgebra { var: Some(var) }
    }
}

impl Algebra for DegreeAlgebra {
    type Value = u64;

    fn var(&self, i: u32) -> Result<u64> {
        Ok(match self.var {
            None => 1,
            Some(v) => (v == i) as u64,
        })
    }

    fn constant(&self, _c: &Scalar) -> Result<u64> {
        Ok(0)
    }

    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(*a.max(b))
    }

    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(a.saturating_add(*b))
    }
}
