use crate::coeffring::Scalar;
use crate::ir::{Leaf, Op, Operand, ProgramBuilder, Slp, SparsePolynomial};

/// Two-register program: register 0 builds `c * x_{i1} * ... * x_{ik}` for
/// one term at a time, left to right, and register 1 accumulates.
pub fn sparse_to_width2(p: &SparsePolynomial) -> Slp {
    let ring = p.ring();
    let mut b = ProgramBuilder::new();
    let mut first = true;
    let mut emit_term = |b: &mut ProgramBuilder, letters: &[u32], c: &Scalar| {
        match letters.split_first() {
            None => b.load(0, Leaf::Const(c.clone())),
            Some((&x, rest)) => {
                b.apply(0, Op::Mul, Operand::Leaf(Leaf::Const(c.clone())), Operand::Leaf(Leaf::Var(x)));
                for &y in rest {
                    b.apply(0, Op::Mul, Operand::Reg(0), Operand::Leaf(Leaf::Var(y)));
                }
            }
        }
        if first {
            b.apply(1, Op::Mul, Operand::Reg(0), Operand::Leaf(Leaf::Const(ring.one())));
            first = false;
        } else {
            b.apply(1, Op::Add, Operand::Reg(1), Operand::Reg(0));
        }
    };
    if p.is_zero() {
        emit_term(&mut b, &[], &ring.zero());
    }
    for (m, c) in p.terms() {
        emit_term(&mut b, &m.letters(), c);
    }
    b.finish(ring, p.mode(), p.num_vars(), 1).expect("width-2 program is valid")
}
