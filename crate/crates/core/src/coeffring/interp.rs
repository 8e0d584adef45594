use std::collections::HashSet;

use super::Scalar;
use crate::error::{Error, Result};

/// Coefficients `c_0..c_m` of the unique polynomial of degree at most `m`
/// taking `values[j]` at `points[j]`, i.e. the solution of `M c = v` for the
/// Vandermonde matrix `M_{j,i} = points[j]^i`.
///
/// Lagrange form: the master polynomial `prod (z - z_j)` is built once and
/// each basis numerator is recovered by synthetic division, so the whole
/// solve is `O(m^2)`.
pub fn vandermonde_solve(points: &[Scalar], values: &[Scalar]) -> Result<Vec<Scalar>> {
    if points.len() != values.len() {
        return Err(Error::ArityMismatch { expected: points.len(), got: values.len() });
    }
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring();
    for s in points.iter().chain(values) {
        first.same_ring(s)?;
    }
    let mut seen = HashSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(p.to_string()));
        }
    }

    let n = points.len();
    // master[i] is the coefficient of z^i in prod_j (z - z_j)
    let mut master = vec![ring.zero(); n + 1];
    master[0] = ring.one();
    for (deg, z) in points.iter().enumerate() {
        for i in (0..=deg + 1).rev() {
            let shifted = if i > 0 { master[i - 1].clone() } else { ring.zero() };
            master[i] = &shifted - &(&master[i] * z);
        }
    }

    let mut coeffs = vec![ring.zero(); n];
    let mut basis = vec![ring.zero(); n];
    for (j, zj) in points.iter().enumerate() {
        // basis = master / (z - z_j)
        let mut carry = ring.zero();
        for i in (0..n).rev() {
            carry = &master[i + 1] + &(&carry * zj);
            basis[i] = carry.clone();
        }
        let mut denom = ring.one();
        for (k, zk) in points.iter().enumerate() {
            if k != j {
                denom = &denom * &(zj - zk);
            }
        }
        let weight = values[j].checked_div(&denom)?;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c = &*c + &(&weight * b);
        }
    }
    Ok(coeffs)
}

/// Weight vector `w` with `sum_j w_j * g(z_j) = [z^index] g` for every
/// polynomial `g` of degree below `points.len()`: row `index` of the inverse
/// Vandermonde matrix.
pub fn coefficient_extractor(points: &[Scalar], index: usize) -> Result<Vec<Scalar>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring();
    let mut unit = vec![ring.zero(); points.len()];
    let mut out = Vec::with_capacity(points.len());
    for j in 0..points.len() {
        unit[j] = ring.one();
        let c = vandermonde_solve(points, &unit)?;
        out.push(c.get(index).cloned().unwrap_or_else(|| ring.zero()));
        unit[j] = ring.zero();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{Ring, DEFAULT_PRIME};
    use proptest::prelude::*;

    fn horner(coeffs: &[Scalar], z: &Scalar) -> Scalar {
        let ring = z.ring();
        coeffs.iter().rev().fold(ring.zero(), |acc, c| &(&acc * z) + c)
    }

    #[test]
    fn linear_over_rationals() {
        let q = Ring::Rational;
        let c = vandermonde_solve(&[q.from_u64(0), q.from_u64(1)], &[q.from_u64(1), q.from_u64(3)]).unwrap();
        assert_eq!(c, vec![q.from_u64(1), q.from_u64(2)]);
    }

    #[test]
    fn constant() {
        let q = Ring::Rational;
        let c = vandermonde_solve(&[q.from_i64(-4)], &[q.from_u64(9)]).unwrap();
        assert_eq!(c, vec![q.from_u64(9)]);
    }

    #[test]
    fn quadratic_over_f7() {
        let f7 = Ring::prime(7).unwrap();
        let target = [f7.from_u64(2), f7.from_u64(3), f7.from_u64(1)];
        let points: Vec<_> = [1, 2, 3].iter().map(|&v| f7.from_u64(v)).collect();
        let values: Vec<_> = points.iter().map(|z| horner(&target, z)).collect();
        assert_eq!(values, vec![f7.from_u64(6), f7.from_u64(5), f7.from_u64(6)]);
        assert_eq!(vandermonde_solve(&points, &values).unwrap(), target.to_vec());
    }

    #[test]
    fn duplicate_points_rejected() {
        let q = Ring::Rational;
        let r = vandermonde_solve(&[q.from_u64(2), q.from_u64(2)], &[q.one(), q.one()]);
        assert!(matches!(r, Err(Error::DuplicatePoint(_))));
    }

    #[test]
    fn ring_mismatch_rejected() {
        let q = Ring::Rational;
        let f = Ring::prime(11).unwrap();
        let r = vandermonde_solve(&[q.from_u64(0), f.from_u64(1)], &[q.one(), q.one()]);
        assert!(matches!(r, Err(Error::RingMismatch(..))));
    }

    #[test]
    fn extractor_picks_one_coefficient() {
        let q = Ring::Rational;
        let points = q.distinct_points(4).unwrap();
        let g = [q.from_u64(5), q.from_i64(-2), q.from_u64(7), q.from_u64(3)];
        let w = coefficient_extractor(&points, 2).unwrap();
        let got = points.iter().zip(&w).fold(q.zero(), |acc, (z, wj)| &acc + &(wj * &horner(&g, z)));
        assert_eq!(got, q.from_u64(7));
    }

    proptest! {
        #[test]
        fn reevaluation_reproduces_values(
            raw_points in proptest::collection::hash_set(0u64..DEFAULT_PRIME, 1..=32),
            seed in any::<u64>(),
        ) {
            let ring = Ring::default_prime();
            let points: Vec<_> = raw_points.into_iter().map(|v| ring.from_u64(v)).collect();
            let values: Vec<_> = (0..points.len() as u64)
                .map(|i| ring.from_u64(seed.wrapping_mul(6364136223846793005).wrapping_add(i.wrapping_mul(1442695040888963407))))
                .collect();
            let coeffs = vandermonde_solve(&points, &values).unwrap();
            for (z, v) in points.iter().zip(&values) {
                prop_assert_eq!(&horner(&coeffs, z), v);
            }
        }
    }
}
