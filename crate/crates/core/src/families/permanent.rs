use crate::coeffring::Ring;
use crate::error::{Error, Result};
use crate::ir::{Caps, Mode, Monomial, SparsePolynomial};

/// Index of `x_ij` in a `k x k` matrix of variables.
pub fn permanent_var(k: u32, i: u32, j: u32) -> u32 {
    (i - 1) * k + j
}

fn permutations(k: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &out {
            for v in 1..=k {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// `sum_sigma prod_i x_(i, sigma(i))` on `k^2` variables.
pub fn build_permanent_sparse(k: u32, ring: Ring, caps: Caps) -> Result<SparsePolynomial> {
    if k == 0 {
        return Err(Error::InvalidParameter("permanent needs k >= 1".into()));
    }
    let terms = (1..=k as usize).try_fold(1usize, |acc, i| acc.checked_mul(i).filter(|&t| t <= caps.max_terms));
    if terms.is_none() {
        return Err(Error::TermCapExceeded { cap: caps.max_terms });
    }
    let mut p = SparsePolynomial::zero(ring, Mode::Commutative, k * k);
    for sigma in permutations(k) {
        let m = Monomial::from_exponents(sigma.iter().enumerate().map(|(i, &j)| (permanent_var(k, i as u32 + 1, j), 1)));
        p.add_term(m, ring.one());
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_permanents() {
        let caps = Caps::default();
        assert_eq!(build_permanent_sparse(1, Ring::Rational, caps).unwrap().to_string(), "x1");
        assert_eq!(build_permanent_sparse(2, Ring::Rational, caps).unwrap().to_string(), "x1*x4 + x2*x3");
        let p3 = build_permanent_sparse(3, Ring::Rational, caps).unwrap();
        assert_eq!(p3.len(), 6);
        assert!(p3.terms().keys().all(|m| m.degree() == 3));
    }

    #[test]
    fn term_cap() {
        let caps = Caps { max_terms: 100, ..Caps::default() };
        assert!(matches!(build_permanent_sparse(5, Ring::Rational, caps), Err(Error::TermCapExceeded { cap: 100 })));
    }
}
