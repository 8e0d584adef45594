//! Scalar arithmetic: prime fields `F_p` with a configurable modulus below
//! 2^63, and exact rationals backed by arbitrary-precision integers.

mod interp;
pub mod linalg;
mod primality;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use interp::{coefficient_extractor, vandermonde_solve};
pub use primality::is_prime;

/// 2^61 - 1. Large enough for every characteristic and field-size
/// precondition the transforms impose at practical sizes.
pub const DEFAULT_PRIME: u64 = 2_305_843_009_213_693_951;

/// The scalar domain of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Prime(u64),
    Rational,
}

impl Ring {
    /// Checked constructor for a prime field.
    pub fn prime(p: u64) -> Result<Ring> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Ring::Prime(p))
    }

    pub fn default_prime() -> Ring {
        Ring::Prime(DEFAULT_PRIME)
    }

    /// `p` for prime fields, 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Prime(p) => *p,
            Ring::Rational => 0,
        }
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Option<u64> {
        match self {
            Ring::Prime(p) => Some(*p),
            Ring::Rational => None,
        }
    }

    /// True when the ring has at least `count` distinct elements.
    pub fn has_elements(&self, count: u64) -> bool {
        self.size().map_or(true, |p| p >= count)
    }

    /// Fails unless `char(F) == 0` or `char(F) > bound`.
    pub fn require_characteristic_above(&self, bound: u64) -> Result<()> {
        match self {
            Ring::Prime(p) if *p <= bound => Err(Error::CharacteristicTooSmall {
                characteristic: *p,
                needed: bound,
            }),
            _ => Ok(()),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_u64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        match self {
            Ring::Prime(p) => Scalar::Mod { value: v % p, modulus: *p },
            Ring::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Ring::Prime(p) => {
                let r = (v as i128).rem_euclid(*p as i128) as u64;
                Scalar::Mod { value: r, modulus: *p }
            }
            Ring::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Ring::Prime(p) => {
                let r = v.mod_floor_u64(*p);
                Scalar::Mod { value: r, modulus: *p }
            }
            Ring::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
        }
    }

    /// `num/den` as a ring element; fails when `den` is zero in the ring.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        let n = self.from_bigint(num);
        let inv = d.inverse().ok_or(Error::DivisionByZero)?;
        Ok(&n * &inv)
    }

    /// The canonical images of `0, 1, ..., count-1`; fails if they are not
    /// pairwise distinct in this ring.
    pub fn distinct_points(&self, count: u64) -> Result<Vec<Scalar>> {
        if !self.has_elements(count) {
            return Err(Error::FieldTooSmall(format!(
                "need {count} distinct elements, ring {self} has {}",
                self.characteristic()
            )));
        }
        Ok((0..count).map(|i| self.from_u64(i)).collect())
    }

    /// Parses `n`, `-n` or `n/d`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, String> {
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (a, b),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| format!("bad scalar `{text}`"))?;
        let den: BigInt = den.parse().map_err(|_| format!("bad scalar `{text}`"))?;
        self.from_fraction(&num, &den)
            .map_err(|_| format!("scalar `{text}` has a zero denominator in {self}"))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Prime(p) => write!(f, "prime {p}"),
            Ring::Rational => write!(f, "rational"),
        }
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
}

/// An element of a [`Ring`]. Prime-field values are canonical residues in
/// `[0, p)`; rationals are kept in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u64, modulus: u64 },
    Rational(BigRational),
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar ring mismatch: {} vs {}", a.ring(), b.ring())
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Mod { modulus, .. } => Ring::Prime(*modulus),
            Scalar::Rational(_) => Ring::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    /// Nonnegativity only has meaning over the rationals; residues report
    /// `false` so that prime-field circuits are never treated as monotone.
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Scalar::Mod { .. } => false,
            Scalar::Rational(q) => !q.is_negative(),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_ring(other)?;
        let inv = other.inverse().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn pow(&self, exp: u64) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: pow_mod(*value, exp, *modulus),
                modulus: *modulus,
            },
            Scalar::Rational(q) => {
                let e = i32::try_from(exp).expect("rational exponent fits in i32");
                Scalar::Rational(num_traits::Pow::pow(q, e))
            }
        }
    }

    pub fn same_ring(&self, other: &Scalar) -> Result<()> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring().to_string(), other.ring().to_string()))
        }
    }

    /// Residue for prime-field values.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                let s = *a as u128 + *b as u128;
                Scalar::Mod { value: (s % *p as u128) as u64, modulus: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                let v = if a >= b { a - b } else { p - (b - a) };
                Scalar::Mod { value: v, modulus: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: mul_mod(*a, *b, *p), modulus: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
