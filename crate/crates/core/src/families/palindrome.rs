use crate::coeffring::Ring;
use crate::error::{Error, Result};
use crate::ir::{LayeredCircuit, Leaf, Mode, Op, Operand, ProgramBuilder, Slp};

/// Two-register program for `sum_w w w^R` over words of length `n` in
/// `x1, x2`, via `P_t = x1 P_(t-1) x1 + x2 P_(t-1) x2`.
pub fn palindrome_program(n: u32, ring: Ring) -> Result<Slp> {
    if n == 0 {
        return Err(Error::InvalidParameter("palindromes need n >= 1".into()));
    }
    let (a, b) = (0, 1);
    let x = |i| Operand::Leaf(Leaf::Var(i));
    let r = Operand::Reg;
    let mut p = ProgramBuilder::new();
    p.apply(b, Op::Mul, x(1), x(1));
    p.apply(a, Op::Mul, x(2), x(2));
    p.apply(a, Op::Add, r(a), r(b));
    for _ in 1..n {
        p.apply(b, Op::Mul, x(1), r(a));
        p.apply(b, Op::Mul, r(b), x(1));
        p.apply(a, Op::Mul, x(2), r(a));
        p.apply(a, Op::Mul, r(a), x(2));
        p.apply(a, Op::Add, r(a), r(b));
    }
    p.finish(ring, Mode::Noncommutative, 2, a)
}

/// Width-2 staggered circuit of size `10n - 2`.
pub fn build_palindrome(n: u32, ring: Ring) -> Result<LayeredCircuit> {
    Ok(palindrome_program(n, ring)?.to_staggered_circuit(&format!("palindrome_{n}")))
}
