use super::p_family::FamilyParams;
use crate::coeffring::Ring;
use crate::error::{Error, Result};
use crate::ir::Formula;

/// Image of one variable of `P^l_k` under a projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    Var(u32),
    Zero,
    One,
}

struct Embedder {
    l: usize,
    out: Vec<Projection>,
}

impl Embedder {
    /// Number of `P` variables under a node of height `h`.
    fn span(&self, h: u32) -> usize {
        self.l.pow(h)
    }

    fn make_zero(&mut self, offset: usize, h: u32) {
        let end = offset + self.span(h);
        self.out[offset..end].fill(Projection::Zero);
    }

    fn make_one(&mut self, offset: usize, h: u32) {
        if h == 0 {
            self.out[offset] = Projection::One;
        } else if h % 2 == 1 {
            for j in 0..self.l {
                self.make_one(offset + j * self.span(h - 1), h - 1);
            }
        } else {
            self.make_one(offset, h - 1);
            let (rest, end) = (offset + self.span(h - 1), offset + self.span(h));
            self.out[rest..end].fill(Projection::Zero);
        }
    }

    /// Embeds `t` into the node of height `h` whose variables start at
    /// `offset`. Even heights are sums and odd heights products.
    fn embed(&mut self, t: &Formula, offset: usize, h: u32) -> Result<()> {
        if h == 0 {
            self.out[offset] = match t {
                Formula::Var(v) => Projection::Var(*v),
                Formula::Const(c) if c.is_zero() => Projection::Zero,
                Formula::Const(c) if c.is_one() => Projection::One,
                Formula::Const(c) => {
                    return Err(Error::InvalidParameter(format!("constant {c} is neither 0 nor 1")));
                }
                _ => return Err(Error::CapacityExceeded("target is deeper than 2k".into())),
            };
            return Ok(());
        }
        let is_sum = h % 2 == 0;
        let children: &[Formula] = match t {
            Formula::Sum(cs) if is_sum => cs,
            Formula::Product(cs) if !is_sum => cs,
            other => std::slice::from_ref(other),
        };
        if children.len() > self.l {
            return Err(Error::CapacityExceeded(format!("fan-in {} exceeds l = {}", children.len(), self.l)));
        }
        let span = self.span(h - 1);
        for j in 0..self.l {
            let at = offset + j * span;
            match children.get(j) {
                Some(c) => self.embed(c, at, h - 1)?,
                None if is_sum => self.make_zero(at, h - 1),
                None => self.make_one(at, h - 1),
            }
        }
        Ok(())
    }
}

/// Substitution of target variables and the constants 0 and 1 for the
/// variables of `P^l_k` under which `P^l_k` becomes `target`. Fan-ins must
/// be at most `l`, the depth at most `2k`, and the constants 0 or 1.
pub fn project_to_formula(target: &Formula, params: FamilyParams) -> Result<Vec<Projection>> {
    let mut e = Embedder { l: params.l as usize, out: vec![Projection::Zero; params.num_vars() as usize] };
    e.embed(&target.flattened(), 0, 2 * params.k)?;
    Ok(e.out)
}

/// Substitutes `map` into the variables of `f`.
pub fn apply_projection(f: &Formula, map: &[Projection], ring: Ring) -> Formula {
    match f {
        Formula::Var(i) => match &map[*i as usize - 1] {
            Projection::Var(v) => Formula::Var(*v),
            Projection::Zero => Formula::Const(ring.zero()),
            Projection::One => Formula::Const(ring.one()),
        },
        Formula::Const(c) => Formula::Const(c.clone()),
        Formula::Sum(cs) => Formula::Sum(cs.iter().map(|c| apply_projection(c, map, ring)).collect()),
        Formula::Product(cs) => Formula::Product(cs.iter().map(|c| apply_projection(c, map, ring)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::p_formula;
    use crate::ir::{Caps, Mode};

    fn v(i: u32) -> Formula {
        Formula::Var(i)
    }

    fn check(target: &Formula, params: FamilyParams, n: u32) {
        let ring = Ring::Rational;
        let map = project_to_formula(target, params).unwrap();
        let got = apply_projection(&p_formula(params), &map, ring).expand(ring, Mode::Commutative, n, Caps::default()).unwrap();
        assert_eq!(got, target.expand(ring, Mode::Commutative, n, Caps::default()).unwrap());
    }

    #[test]
    fn small_target() {
        let t = Formula::Sum(vec![Formula::Product(vec![v(1), v(2)]), v(3)]);
        let p = FamilyParams::new(2, 1).unwrap();
        let map = project_to_formula(&t, p).unwrap();
        assert_eq!(map, vec![Projection::Var(1), Projection::Var(2), Projection::Var(3), Projection::One]);
        check(&t, p, 3);
    }

    #[test]
    fn identity() {
        let p = FamilyParams::new(2, 2).unwrap();
        let map = project_to_formula(&p_formula(p), p).unwrap();
        assert_eq!(map, (1..=16).map(Projection::Var).collect::<Vec<_>>());
    }

    #[test]
    fn mismatched_shapes() {
        let p = FamilyParams::new(2, 2).unwrap();
        check(&Formula::Product(vec![v(1), Formula::Sum(vec![v(2), v(3)])]), p, 3);
        check(&v(2), p, 2);
        check(&Formula::Const(Ring::Rational.one()), p, 1);
        check(&Formula::Sum(vec![]), p, 1);
    }

    #[test]
    fn capacity() {
        let p = FamilyParams::new(2, 1).unwrap();
        let t = Formula::Product(vec![v(1), v(2), v(3)]);
        assert!(matches!(project_to_formula(&t, p), Err(Error::CapacityExceeded(_))));
        let deep = Formula::Product(vec![v(1), Formula::Sum(vec![v(2), Formula::Product(vec![v(1), v(3)])])]);
        assert!(matches!(project_to_formula(&deep, p), Err(Error::CapacityExceeded(_))));
    }
}
