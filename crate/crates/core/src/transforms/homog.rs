use super::{check_total_degree, require_commutative, zero_program};
use crate::coeffring::{coefficient_extractor, Scalar};
use crate::error::Result;
use crate::ir::{Circuit, Instr, Leaf, Op, Operand, ProgramBuilder, Slp};

/// Extra registers used on top of the input program's.
pub const W_H: usize = 3;

fn is_var(o: &Operand) -> bool {
    matches!(o, Operand::Leaf(Leaf::Var(_)))
}

fn konst(c: Scalar) -> Operand {
    Operand::Leaf(Leaf::Const(c))
}

/// Appends `p` with every variable `x` replaced by `z * x`. Register `temp`
/// holds `z * x` when a variable meets a register operand.
pub(crate) fn emit_scaled(b: &mut ProgramBuilder, p: &Slp, z: &Scalar, temp: usize) {
    for s in p.steps() {
        match s {
            Instr::Load { dst, leaf: Leaf::Var(x) } => {
                b.apply(*dst, Op::Mul, Operand::Leaf(Leaf::Var(*x)), konst(z.clone()));
            }
            Instr::Load { .. } => b.push(s.clone()),
            Instr::Apply { dst, op, lhs, rhs } => {
                let dst = *dst;
                match (is_var(lhs), is_var(rhs)) {
                    (false, false) => b.push(s.clone()),
                    (true, true) => {
                        b.push(s.clone());
                        let factor = if *op == Op::Mul { z * z } else { z.clone() };
                        b.apply(dst, Op::Mul, Operand::Reg(dst), konst(factor));
                    }
                    (lv, _) => {
                        let (var, other) = if lv { (lhs, rhs) } else { (rhs, lhs) };
                        match other {
                            Operand::Leaf(Leaf::Const(c)) if *op == Op::Mul => {
                                b.apply(dst, Op::Mul, var.clone(), konst(c * z));
                            }
                            Operand::Leaf(Leaf::Const(c)) => {
                                b.apply(dst, Op::Mul, var.clone(), konst(z.clone()));
                                b.apply(dst, Op::Add, Operand::Reg(dst), konst(c.clone()));
                            }
                            _ => {
                                b.apply(temp, Op::Mul, var.clone(), konst(z.clone()));
                                let (l, r) = if lv {
                                    (Operand::Reg(temp), rhs.clone())
                                } else {
                                    (lhs.clone(), Operand::Reg(temp))
                                };
                                b.apply(dst, *op, l, r);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// `sum_j weights[j] * c(z_j x)` with `z_j = j`, using the input registers
/// plus one temporary and one accumulator.
pub(crate) fn combine_scaled(c: &Slp, weights: &[Scalar]) -> Result<Slp> {
    let ring = c.ring();
    let w = c.registers();
    let (temp, acc) = (w, w + 1);
    let out = c.output();
    let mut b = ProgramBuilder::new();
    let mut first = true;
    for (j, wj) in weights.iter().enumerate() {
        if wj.is_zero() {
            continue;
        }
        emit_scaled(&mut b, c, &ring.from_u64(j as u64), temp);
        if first {
            b.apply(acc, Op::Mul, Operand::Reg(out), konst(wj.clone()));
            first = false;
        } else {
            b.apply(out, Op::Mul, Operand::Reg(out), konst(wj.clone()));
            b.apply(acc, Op::Add, Operand::Reg(acc), Operand::Reg(out));
        }
    }
    if first {
        return Ok(zero_program(c));
    }
    b.finish(ring, c.mode(), c.num_vars(), acc)
}

/// Rows `0..=m` of the inverse Vandermonde matrix on `0..=m`.
fn extractor_rows(c: &Slp, m: u32) -> Result<Vec<Vec<Scalar>>> {
    let points = c.ring().distinct_points(m as u64 + 1)?;
    (0..=m as usize).map(|i| coefficient_extractor(&points, i)).collect()
}

fn prepare(c: &Slp, m: u32) -> Result<Vec<Vec<Scalar>>> {
    require_commutative(c, "homogeneous components")?;
    let rows = extractor_rows(c, m)?;
    check_total_degree(c, m as u64)?;
    Ok(rows)
}

/// `H_i(c)` for a program of degree at most `m`.
pub fn homogeneous_component(c: &Slp, m: u32, i: u32) -> Result<Slp> {
    let rows = prepare(c, m)?;
    match rows.get(i as usize) {
        Some(row) => combine_scaled(c, row),
        None => Ok(zero_program(c)),
    }
}

/// `H_0(c), ..., H_m(c)`.
pub fn homogeneous_components(c: &Slp, m: u32) -> Result<Vec<Slp>> {
    let rows = prepare(c, m)?;
    rows.iter().map(|row| combine_scaled(c, row)).collect()
}

/// `H_{<=k}(c)` for a program of degree at most `m`.
pub fn homogeneous_prefix(c: &Slp, m: u32, k: u32) -> Result<Slp> {
    let rows = prepare(c, m)?;
    prefix_from_rows(c, &rows, k)
}

/// Same as [`homogeneous_prefix`] when the caller already knows the degree
/// bound holds.
pub(crate) fn homogeneous_prefix_trusted(c: &Slp, m: u32, k: u32) -> Result<Slp> {
    require_commutative(c, "homogeneous components")?;
    let rows = extractor_rows(c, m)?;
    prefix_from_rows(c, &rows, k)
}

fn prefix_from_rows(c: &Slp, rows: &[Vec<Scalar>], k: u32) -> Result<Slp> {
    let ring = c.ring();
    let mut weights = vec![ring.zero(); rows.len()];
    for row in rows.iter().take(k as usize + 1) {
        for (w, a) in weights.iter_mut().zip(row) {
            *w = &*w + a;
        }
    }
    combine_scaled(c, &weights)
}

/// `H_{<=0}(c), ..., H_{<=m}(c)`.
pub fn homogeneous_partial_sums(c: &Slp, m: u32) -> Result<Vec<Slp>> {
    let rows = prepare(c, m)?;
    (0..=m).map(|k| prefix_from_rows(c, &rows, k)).collect()
}
