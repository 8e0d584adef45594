use std::ops::RangeInclusive;

use num_bigint::BigUint;

use crate::coeffring::Ring;
use crate::error::{Error, Result};
use crate::ir::{Formula, LayeredCircuit, Mode};
use crate::transforms::depth_to_width;

/// Parameters of the sum-of-products family `P^l_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub l: u32,
    pub k: u32,
}

impl FamilyParams {
    pub fn new(l: u32, k: u32) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidParameter(format!("l = {l}, need l >= 2")));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("k = 0, need k >= 1".into()));
        }
        if (l as u64).checked_pow(2 * k).map_or(true, |n| n > u32::MAX as u64) {
            return Err(Error::InvalidParameter(format!("l^(2k) overflows for l = {l}, k = {k}")));
        }
        Ok(FamilyParams { l, k })
    }

    /// `l^(2k)`.
    pub fn num_vars(&self) -> u32 {
        self.l.pow(2 * self.k)
    }

    /// `l^k`.
    pub fn degree(&self) -> u32 {
        self.l.pow(self.k)
    }

    /// `l^((l^k - 1) / (l - 1))`.
    pub fn monomial_count(&self) -> BigUint {
        let e = (self.degree() - 1) / (self.l - 1);
        BigUint::from(self.l).pow(e)
    }

    /// Variables of the top-level block `P_i`, `1 <= i <= l`.
    pub fn block(&self, i: u32) -> RangeInclusive<u32> {
        let w = self.l.pow(2 * self.k - 1);
        (i - 1) * w + 1..=i * w
    }

    /// Variables of the copy `Q_ij` of `P^l_(k-1)` inside block `P_i`.
    pub fn sub_block(&self, i: u32, j: u32) -> RangeInclusive<u32> {
        let w = self.l.pow(2 * self.k - 2);
        let base = *self.block(i).start() - 1;
        base + (j - 1) * w + 1..=base + j * w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PForm {
    Formula,
    Circuit,
}

#[derive(Clone, Debug)]
pub enum PBuild {
    Formula(Formula),
    Circuit(LayeredCircuit),
}

fn level(l: u32, k: u32, offset: u32) -> Formula {
    if k == 0 {
        return Formula::Var(offset + 1);
    }
    let outer = l.pow(2 * k - 1);
    let inner = l.pow(2 * k - 2);
    Formula::Sum(
        (0..l)
            .map(|i| Formula::Product((0..l).map(|j| level(l, k - 1, offset + i * outer + j * inner)).collect()))
            .collect(),
    )
}

/// The alternating depth-`2k` formula.
pub fn p_formula(params: FamilyParams) -> Formula {
    level(params.l, params.k, 0)
}

pub fn build_p(params: FamilyParams, form: PForm, ring: Ring) -> Result<PBuild> {
    let f = p_formula(params);
    Ok(match form {
        PForm::Formula => PBuild::Formula(f),
        PForm::Circuit => {
            let name = format!("P_{}_{}", params.l, params.k);
            PBuild::Circuit(depth_to_width(&f, ring, Mode::Commutative, params.num_vars(), &name)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Caps, Circuit};

    #[test]
    fn base_case() {
        let p = FamilyParams::new(2, 1).unwrap();
        let f = p_formula(p);
        let e = f.expand(Ring::Rational, Mode::Commutative, 4, Caps::default()).unwrap();
        assert_eq!(e.to_string(), "x1*x2 + x3*x4");
    }

    #[test]
    fn counts() {
        let p = FamilyParams::new(2, 2).unwrap();
        assert_eq!((p.num_vars(), p.degree()), (16, 4));
        assert_eq!(p.monomial_count(), BigUint::from(8u32));
        assert_eq!(FamilyParams::new(3, 2).unwrap().monomial_count(), BigUint::from(81u32));
        let PBuild::Circuit(c) = build_p(p, PForm::Circuit, Ring::Rational).unwrap() else { panic!() };
        assert!(c.width() <= 4);
        assert!(c.is_monotone());
        assert_eq!(c.expand(Caps::default()).unwrap().len(), 8);
    }

    #[test]
    fn blocks() {
        let p = FamilyParams::new(2, 2).unwrap();
        assert_eq!(p.block(2), 9..=16);
        assert_eq!(p.sub_block(2, 1), 9..=12);
        assert_eq!(p.sub_block(1, 2), 5..=8);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FamilyParams::new(2, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(FamilyParams::new(1, 3), Err(Error::InvalidParameter(_))));
    }
}
