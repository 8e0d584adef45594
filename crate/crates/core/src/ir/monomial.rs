use std::fmt;

use crate::coeffring::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Commutative,
    Noncommutative,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Commutative => "commutative",
            Mode::Noncommutative => "noncommutative",
        })
    }
}

/// A monomial with coefficient 1. Commutative monomials are sorted
/// `(variable, exponent)` lists with positive exponents; noncommutative ones
/// are words. Variables are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    Comm(Vec<(u32, u32)>),
    Word(Vec<u32>),
}

impl Monomial {
    pub fn one(mode: Mode) -> Monomial {
        match mode {
            Mode::Commutative => Monomial::Comm(Vec::new()),
            Mode::Noncommutative => Monomial::Word(Vec::new()),
        }
    }

    pub fn var(mode: Mode, i: u32) -> Monomial {
        match mode {
            Mode::Commutative => Monomial::Comm(vec![(i, 1)]),
            Mode::Noncommutative => Monomial::Word(vec![i]),
        }
    }

    /// Commutative monomial from an exponent list; zero exponents are dropped
    /// and repeated variables merged.
    pub fn from_exponents(pairs: impl IntoIterator<Item = (u32, u32)>) -> Monomial {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (i, e) in v {
            match out.last_mut() {
                Some((j, f)) if *j == i => *f += e,
                _ => out.push((i, e)),
            }
        }
        Monomial::Comm(out)
    }

    pub fn word(letters: impl IntoIterator<Item = u32>) -> Monomial {
        Monomial::Word(letters.into_iter().collect())
    }

    pub fn mode(&self) -> Mode {
        match self {
            Monomial::Comm(_) => Mode::Commutative,
            Monomial::Word(_) => Mode::Noncommutative,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Monomial::Comm(v) => v.is_empty(),
            Monomial::Word(w) => w.is_empty(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Monomial::Comm(v) => v.iter().map(|&(_, e)| e).sum(),
            Monomial::Word(w) => w.len() as u32,
        }
    }

    pub fn degree_in(&self, var: u32) -> u32 {
        match self {
            Monomial::Comm(v) => v.iter().find(|&&(i, _)| i == var).map_or(0, |&(_, e)| e),
            Monomial::Word(w) => w.iter().filter(|&&i| i == var).count() as u32,
        }
    }

    /// Every variable occurrence in order; exponents are unrolled.
    pub fn letters(&self) -> Vec<u32> {
        match self {
            Monomial::Comm(v) => v.iter().flat_map(|&(i, e)| std::iter::repeat(i).take(e as usize)).collect(),
            Monomial::Word(w) => w.clone(),
        }
    }

    /// Distinct variables, ascending.
    pub fn variables(&self) -> Vec<u32> {
        let mut vs = match self {
            Monomial::Comm(v) => v.iter().map(|&(i, _)| i).collect(),
            Monomial::Word(w) => w.clone(),
        };
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn max_var(&self) -> u32 {
        self.variables().last().copied().unwrap_or(0)
    }

    pub fn is_multilinear(&self) -> bool {
        match self {
            Monomial::Comm(v) => v.iter().all(|&(_, e)| e == 1),
            Monomial::Word(w) => {
                let mut s = w.clone();
                s.sort_unstable();
                s.windows(2).all(|p| p[0] != p[1])
            }
        }
    }

    /// Product `self * other`; words concatenate left to right.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        match (self, other) {
            (Monomial::Comm(a), Monomial::Comm(b)) => {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() && j < b.len() {
                    match a[i].0.cmp(&b[j].0) {
                        std::cmp::Ordering::Less => {
                            out.push(a[i]);
                            i += 1;
                        }
                        std::cmp::Ordering::Greater => {
                            out.push(b[j]);
                            j += 1;
                        }
                        std::cmp::Ordering::Equal => {
                            out.push((a[i].0, a[i].1 + b[j].1));
                            i += 1;
                            j += 1;
                        }
                    }
                }
                out.extend_from_slice(&a[i..]);
                out.extend_from_slice(&b[j..]);
                Monomial::Comm(out)
            }
            (Monomial::Word(a), Monomial::Word(b)) => {
                let mut w = Vec::with_capacity(a.len() + b.len());
                w.extend_from_slice(a);
                w.extend_from_slice(b);
                Monomial::Word(w)
            }
            _ => panic!("monomial mode mismatch"),
        }
    }

    /// The word read backwards; commutative monomials are their own reversal.
    pub fn reversed(&self) -> Monomial {
        match self {
            Monomial::Comm(_) => self.clone(),
            Monomial::Word(w) => Monomial::Word(w.iter().rev().copied().collect()),
        }
    }

    /// Drops `var` from the monomial, returning the rest and the removed
    /// exponent. Only meaningful for commutative monomials.
    pub fn split_off(&self, var: u32) -> (Monomial, u32) {
        match self {
            Monomial::Comm(v) => {
                let e = self.degree_in(var);
                (Monomial::Comm(v.iter().copied().filter(|&(i, _)| i != var).collect()), e)
            }
            Monomial::Word(_) => panic!("split_off on a word"),
        }
    }

    /// Value at a point (1-based variables index into `point`).
    pub fn evaluate(&self, point: &[Scalar], one: &Scalar) -> Scalar {
        match self {
            Monomial::Comm(v) => v
                .iter()
                .fold(one.clone(), |acc, &(i, e)| &acc * &point[i as usize - 1].pow(e as u64)),
            Monomial::Word(w) => w.iter().fold(one.clone(), |acc, &i| &acc * &point[i as usize - 1]),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        match self {
            Monomial::Comm(v) => {
                for (k, &(i, e)) in v.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "x{i}")?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
            Monomial::Word(w) => {
                for (k, i) in w.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "x{i}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutative_product_merges_exponents() {
        let a = Monomial::from_exponents([(3, 1), (1, 2)]);
        let b = Monomial::from_exponents([(1, 1), (2, 1)]);
        assert_eq!(a.mul(&b), Monomial::from_exponents([(1, 3), (2, 1), (3, 1)]));
        assert_eq!(a.mul(&b).degree(), 5);
        assert_eq!(a.to_string(), "x1^2*x3");
    }

    #[test]
    fn words_concatenate() {
        let a = Monomial::word([1, 2]);
        let b = Monomial::word([2]);
        assert_eq!(a.mul(&b), Monomial::word([1, 2, 2]));
        assert_ne!(a.mul(&b), b.mul(&a));
        assert_eq!(Monomial::word([1, 2, 2]).reversed(), Monomial::word([2, 2, 1]));
        assert!(!Monomial::word([1, 2, 1]).is_multilinear());
    }

    #[test]
    fn zero_exponents_dropped() {
        assert_eq!(Monomial::from_exponents([(4, 0)]), Monomial::one(Mode::Commutative));
        assert_eq!(Monomial::from_exponents([(2, 1), (2, 2)]).degree_in(2), 3);
    }
}
