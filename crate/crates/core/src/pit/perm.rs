use super::{nw_pit, schwartz_zippel_with, HardFamily, NwPitOptions, SzOptions, Verdict};
use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::ir::{Circuit, LayeredCircuit, Leaf, Mode, Op, Operand, ProgramBuilder, Slp};
use crate::rng::SeedStream;

/// Zero tester used for each identity.
#[derive(Clone, Copy, Debug)]
pub enum Backend {
    SchwartzZippel { trials: usize },
    Nw { family: HardFamily, options: NwPitOptions },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermVerdict {
    Accept,
    /// `B_k` is not identically zero. The witness is a point of `k^2`
    /// variables where it does not vanish.
    Reject { k: u32, witness: Vec<Scalar> },
}

/// Leaf map for a candidate on `n^2` variables restricted to the top-left
/// `k x k` block: entries outside it become the identity pattern, entry
/// `(i, j)` inside becomes `target(i, j)`.
fn restrict(ring: Ring, n: u32, k: u32, leaf: &Leaf, target: impl Fn(u32, u32) -> u32) -> Leaf {
    match leaf {
        Leaf::Var(v) => {
            let (i, j) = ((v - 1) / n + 1, (v - 1) % n + 1);
            if i > k || j > k {
                Leaf::Const(if i == j { ring.one() } else { ring.zero() })
            } else {
                Leaf::Var(target(i, j))
            }
        }
        c => c.clone(),
    }
}

/// `B_1 = C_1 - x_11` and, for `k >= 2`,
/// `B_k = C_k(X) - sum_i x_1i C_(k-1)(X_i)` where `X_i` deletes row 1 and
/// column `i`, as a program on `k^2` variables using one register beyond
/// the candidate's.
pub fn permanent_identity(p: &Slp, n: u32, k: u32) -> Result<Slp> {
    let ring = p.ring();
    let acc = p.registers();
    let out = p.output();
    let konst = |s: Scalar| Operand::Leaf(Leaf::Const(s));
    let mut b = ProgramBuilder::new();
    b.inline(p, |l| restrict(ring, n, k, l, |i, j| (i - 1) * k + j));
    if k == 1 {
        b.apply(acc, Op::Mul, Operand::Leaf(Leaf::Var(1)), konst(ring.from_i64(-1)));
        b.apply(acc, Op::Add, Operand::Reg(acc), Operand::Reg(out));
    } else {
        b.apply(acc, Op::Mul, Operand::Reg(out), konst(ring.one()));
        for col in 1..=k {
            b.inline(p, |l| restrict(ring, n, k - 1, l, |i, j| i * k + if j < col { j } else { j + 1 }));
            b.apply(out, Op::Mul, Operand::Reg(out), konst(ring.from_i64(-1)));
            b.apply(out, Op::Mul, Operand::Reg(out), Operand::Leaf(Leaf::Var(col)));
            b.apply(acc, Op::Add, Operand::Reg(acc), Operand::Reg(out));
        }
    }
    b.finish(ring, Mode::Commutative, k * k, acc)
}

/// Checks that `c` (on variables `x_ij = (i - 1) n + j`) computes the
/// `n x n` permanent by testing `B_1, ..., B_n` for zero. Identity `k` uses
/// seed stream `k`.
pub fn verify_permanent(c: &LayeredCircuit, n: u32, backend: &Backend, seed: u64) -> Result<PermVerdict> {
    if c.mode() != Mode::Commutative {
        return Err(Error::ModeMismatch("permanent candidates are commutative".into()));
    }
    if c.num_vars() != n * n {
        return Err(Error::ArityMismatch { expected: (n * n) as usize, got: c.num_vars() as usize });
    }
    let p = Slp::program_of(c)?;
    let seeds = SeedStream::new(seed);
    for k in 1..=n {
        let bk = permanent_identity(&p, n, k)?;
        let verdict = match backend {
            Backend::SchwartzZippel { trials } => schwartz_zippel_with(
                &bk,
                SzOptions { trials: *trials, degree_bound: None, sample_size: None, seed: seeds.child(k as u64).seed() },
            )?,
            Backend::Nw { family, options } => nw_pit(&bk, family, *options)?,
        };
        if let Verdict::NonZero(witness) = verdict {
            return Ok(PermVerdict::Reject { k, witness });
        }
    }
    Ok(PermVerdict::Accept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Ring;
    use crate::families::build_permanent_sparse;
    use crate::ir::Caps;
    use crate::transforms::sparse_to_width2;

    fn candidate(n: u32, ring: Ring) -> LayeredCircuit {
        sparse_to_width2(&build_permanent_sparse(n, ring, Caps::default()).unwrap()).to_staggered_circuit("perm")
    }

    #[test]
    fn identities_vanish_for_the_permanent() {
        let ring = Ring::default_prime();
        for n in 1..=3 {
            let p = Slp::program_of(&candidate(n, ring)).unwrap();
            for k in 1..=n {
                let bk = permanent_identity(&p, n, k).unwrap();
                assert!(bk.expand(Caps::default()).unwrap().is_zero(), "B_{k} for n = {n}");
                assert_eq!(bk.registers(), p.registers() + 1);
            }
        }
    }

    #[test]
    fn accepts_and_rejects() {
        let ring = Ring::default_prime();
        let backend = Backend::SchwartzZippel { trials: 8 };
        for n in 1..=3 {
            assert_eq!(verify_permanent(&candidate(n, ring), n, &backend, 3).unwrap(), PermVerdict::Accept);
        }
        // x11 x22 - x12 x21 is the determinant
        let mut det = build_permanent_sparse(2, ring, Caps::default()).unwrap();
        det.add_term(crate::ir::Monomial::from_exponents([(2, 1), (3, 1)]), ring.from_i64(-2));
        let c = sparse_to_width2(&det).to_staggered_circuit("det");
        let PermVerdict::Reject { k, witness } = verify_permanent(&c, 2, &backend, 3).unwrap() else { panic!() };
        assert_eq!((k, witness.len()), (2, 4));
    }
}
