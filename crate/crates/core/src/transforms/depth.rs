use crate::coeffring::Ring;
use crate::error::Result;
use crate::ir::{CircuitBuilder, Formula, LayeredCircuit, Leaf, Mode, Op, Operand, ProgramBuilder, Slp};

fn leaf_of(f: &Formula) -> Option<Leaf> {
    match f {
        Formula::Var(i) => Some(Leaf::Var(*i)),
        Formula::Const(c) => Some(Leaf::Const(c.clone())),
        _ => None,
    }
}

/// Writes the value of `f` into register `r`, using `r .. r + depth(f)`.
fn compile(f: &Formula, r: usize, ring: Ring, b: &mut ProgramBuilder) {
    let (children, op) = match f {
        Formula::Sum(cs) => (cs, Op::Add),
        Formula::Product(cs) => (cs, Op::Mul),
        leaf => {
            b.load(r, leaf_of(leaf).expect("leaf"));
            return;
        }
    };
    match children.len() {
        0 => {
            let unit = if op == Op::Add { ring.zero() } else { ring.one() };
            b.load(r, Leaf::Const(unit));
            return;
        }
        1 => {
            compile(&children[0], r, ring, b);
            return;
        }
        _ => {}
    }
    let mut started = false;
    let mut pending: Option<Leaf> = None;
    for c in children {
        let operand = match leaf_of(c) {
            Some(l) => Operand::Leaf(l),
            None if !started && pending.is_none() => {
                compile(c, r, ring, b);
                started = true;
                continue;
            }
            None => {
                compile(c, r + 1, ring, b);
                Operand::Reg(r + 1)
            }
        };
        if started {
            b.apply(r, op, Operand::Reg(r), operand);
        } else if let Some(p) = pending.take() {
            b.apply(r, op, Operand::Leaf(p), operand);
            started = true;
        } else if let Operand::Leaf(l) = operand {
            pending = Some(l);
        }
    }
}

/// Register program for a formula of depth `d` using at most `max(d, 1)`
/// registers: the first non-leaf child of a node shares the node's register,
/// later ones use the next register up, and leaf children are read directly.
pub fn formula_program(f: &Formula, ring: Ring, mode: Mode, num_vars: u32) -> Result<Slp> {
    let mut b = ProgramBuilder::new();
    compile(f, 0, ring, &mut b);
    b.finish(ring, mode, num_vars, 0)
}

/// Simulates a depth-`d` formula by a staggered layered circuit of width at
/// most `d`. The size is at most `(d + 1)` times the formula size. The only
/// constants introduced are the shared `1` of the copy gates (and 0/1 for
/// empty sums/products), so monotone formulas stay monotone.
pub fn depth_to_width(f: &Formula, ring: Ring, mode: Mode, num_vars: u32, name: &str) -> Result<LayeredCircuit> {
    if let Some(l) = leaf_of(f) {
        let mut b = CircuitBuilder::new(ring, mode, num_vars);
        let g = match l {
            Leaf::Var(i) => b.var(i),
            Leaf::Const(c) => b.constant(c),
        };
        return b.finish(name, g);
    }
    Ok(formula_program(f, ring, mode, num_vars)?.to_staggered_circuit(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Caps, Circuit};

    fn v(i: u32) -> Formula {
        Formula::Var(i)
    }

    #[test]
    fn sum_of_products() {
        let ring = Ring::Rational;
        let f = Formula::Sum(vec![Formula::Product(vec![v(1), v(2)]), Formula::Product(vec![v(3), v(4)])]);
        let c = depth_to_width(&f, ring, Mode::Commutative, 4, "f").unwrap();
        assert_eq!(c.width(), 2);
        assert_eq!(c.expand(Caps::default()).unwrap(), f.expand(ring, Mode::Commutative, 4, Caps::default()).unwrap());
        assert!(c.is_monotone());
    }

    #[test]
    fn single_leaf() {
        let c = depth_to_width(&v(1), Ring::Rational, Mode::Commutative, 1, "x").unwrap();
        assert_eq!((c.width(), c.size()), (0, 1));
    }

    #[test]
    fn noncommutative_order() {
        let ring = Ring::Rational;
        let f = Formula::Product(vec![v(2), Formula::Sum(vec![v(1), v(2)]), v(1)]);
        let c = depth_to_width(&f, ring, Mode::Noncommutative, 2, "w").unwrap();
        assert_eq!(c.expand(Caps::default()).unwrap(), f.expand(ring, Mode::Noncommutative, 2, Caps::default()).unwrap());
        assert!(c.width() <= 2);
    }
}
