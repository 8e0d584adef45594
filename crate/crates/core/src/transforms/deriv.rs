use super::{check_last_var_degree, falling_factorial, require_commutative, zero_program};
use crate::coeffring::{coefficient_extractor, Scalar};
use crate::error::Result;
use crate::ir::{Circuit, Leaf, Op, Operand, ProgramBuilder, Slp};

/// Extra registers used on top of the input program's.
pub const W_D: usize = 4;

/// Writes `sum_k coeffs[k] * y^k` into register `t` by Horner's rule.
fn horner(b: &mut ProgramBuilder, t: usize, y: u32, coeffs: &[Scalar]) {
    let konst = |c: &Scalar| Operand::Leaf(Leaf::Const(c.clone()));
    let d = coeffs.len() - 1;
    if d == 0 {
        b.load(t, Leaf::Const(coeffs[0].clone()));
        return;
    }
    b.apply(t, Op::Mul, Operand::Leaf(Leaf::Var(y)), konst(&coeffs[d]));
    for k in (1..d).rev() {
        b.apply(t, Op::Add, Operand::Reg(t), konst(&coeffs[k]));
        b.apply(t, Op::Mul, Operand::Reg(t), Operand::Leaf(Leaf::Var(y)));
    }
    b.apply(t, Op::Add, Operand::Reg(t), konst(&coeffs[0]));
}

/// `d^j c / dy^j` where `y` is the last variable and `r` bounds its degree.
///
/// With `P = sum_i C_i y^i` and `C_i = sum_l a_il P(x, z_l)` for the points
/// `z_l = 0..=r`, the derivative is `sum_l P(x, z_l) * u_l(y)` where
/// `u_l(y) = sum_{i>=j} i(i-1)..(i-j+1) a_il y^(i-j)`. Each `u_l` is built
/// by Horner's rule in one temporary next to one accumulator.
pub fn partial_derivative_y(c: &Slp, j: u32, r: u32) -> Result<Slp> {
    require_commutative(c, "partial derivatives")?;
    let ring = c.ring();
    ring.require_characteristic_above(r as u64)?;
    let points = ring.distinct_points(r as u64 + 1)?;
    check_last_var_degree(c, r as u64)?;
    if j > r {
        return Ok(zero_program(c));
    }
    let y = c.num_vars();
    let rows: Vec<Vec<Scalar>> = (0..=r as usize).map(|i| coefficient_extractor(&points, i)).collect::<Result<_>>()?;

    let w = c.registers();
    let (t, acc) = (w, w + 1);
    let out = c.output();
    let mut b = ProgramBuilder::new();
    let mut first = true;
    for (l, z) in points.iter().enumerate() {
        let u: Vec<Scalar> = (j..=r).map(|i| &falling_factorial(ring, i, j) * &rows[i as usize][l]).collect();
        if u.iter().all(Scalar::is_zero) {
            continue;
        }
        b.inline(c, |leaf| match leaf {
            Leaf::Var(v) if *v == y => Leaf::Const(z.clone()),
            other => other.clone(),
        });
        horner(&mut b, t, y, &u);
        if first {
            b.apply(acc, Op::Mul, Operand::Reg(out), Operand::Reg(t));
            first = false;
        } else {
            b.apply(out, Op::Mul, Operand::Reg(out), Operand::Reg(t));
            b.apply(acc, Op::Add, Operand::Reg(acc), Operand::Reg(out));
        }
    }
    if first {
        return Ok(zero_program(c));
    }
    b.finish(ring, c.mode(), c.num_vars(), acc)
}
