#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use slpforge::ir::{Circuit, CircuitBuilder, Instr, LayeredCircuit, Leaf, Mode, Op, Operand, Slp, SparsePolynomial};
use slpforge::{Ring, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_scalar(ring: Ring, rng: &mut ChaCha8Rng) -> Scalar {
    ring.from_i64(rng.gen_range(-3..=3))
}

/// Random layered circuit with layer widths in `1..=width`, at most
/// `max_size` gates and syntactic degree at most `max_degree` everywhere.
pub fn random_layered(
    rng: &mut ChaCha8Rng,
    ring: Ring,
    mode: Mode,
    num_vars: u32,
    width: usize,
    max_size: usize,
    max_degree: u32,
) -> LayeredCircuit {
    let mut b = CircuitBuilder::new(ring, mode, num_vars);
    let mut leaves: Vec<(u32, u32)> = (1..=num_vars).map(|i| (b.var(i), 1)).collect();
    for _ in 0..rng.gen_range(1..=2) {
        leaves.push((b.constant(small_scalar(ring, rng)), 0));
    }
    let mut size = leaves.len();
    let mut prev: Vec<(u32, u32)> = Vec::new();
    let mut layer = 2;
    let mut last = leaves[0].0;
    while size < max_size {
        let w = rng.gen_range(1..=width).min(max_size - size);
        let mut cur = Vec::with_capacity(w);
        for _ in 0..w {
            let pick = |rng: &mut ChaCha8Rng| -> (u32, u32) {
                if !prev.is_empty() && rng.gen_bool(0.75) {
                    *prev.choose(rng).unwrap()
                } else {
                    *leaves.choose(rng).unwrap()
                }
            };
            let (l, dl) = pick(rng);
            let (r, dr) = pick(rng);
            let g = if dl + dr <= max_degree && rng.gen_bool(0.5) {
                (b.mul(layer, l, r), dl + dr)
            } else {
                (b.add(layer, l, r), dl.max(dr))
            };
            cur.push(g);
        }
        size += w;
        last = cur[rng.gen_range(0..cur.len())].0;
        prev = cur;
        layer += 1;
        if rng.gen_bool(0.08) {
            break;
        }
    }
    b.finish("random", last).expect("generator builds valid circuits")
}

/// Random program on `registers` registers with register degrees at most
/// `max_degree`.
pub fn random_slp(rng: &mut ChaCha8Rng, ring: Ring, mode: Mode, num_vars: u32, registers: usize, steps: usize, max_degree: u32) -> Slp {
    let mut deg: Vec<Option<u32>> = vec![None; registers];
    let mut prog = Vec::new();
    let leaf = |rng: &mut ChaCha8Rng| -> (Leaf, u32) {
        if rng.gen_bool(0.7) {
            (Leaf::Var(rng.gen_range(1..=num_vars)), 1)
        } else {
            (Leaf::Const(small_scalar(ring, rng)), 0)
        }
    };
    for r in 0..registers {
        let (l, d) = leaf(rng);
        prog.push(Instr::Load { dst: r, leaf: l });
        deg[r] = Some(d);
    }
    for _ in 0..steps {
        let operand = |rng: &mut ChaCha8Rng, deg: &[Option<u32>]| -> (Operand, u32) {
            if rng.gen_bool(0.7) {
                let r = rng.gen_range(0..registers);
                (Operand::Reg(r), deg[r].unwrap())
            } else {
                let (l, d) = leaf(rng);
                (Operand::Leaf(l), d)
            }
        };
        let (a, da) = operand(rng, &deg);
        let (b, db) = operand(rng, &deg);
        let dst = rng.gen_range(0..registers);
        let (op, d) = if da + db <= max_degree && rng.gen_bool(0.5) { (Op::Mul, da + db) } else { (Op::Add, da.max(db)) };
        prog.push(Instr::Apply { dst, op, lhs: a, rhs: b });
        deg[dst] = Some(d);
    }
    let output = prog.last().unwrap().dst();
    Slp::new(ring, mode, num_vars, registers, prog, output).expect("generator builds valid programs")
}

/// Sparse polynomial with `terms` random terms of degree at most `max_degree`.
pub fn random_sparse(rng: &mut ChaCha8Rng, ring: Ring, mode: Mode, num_vars: u32, terms: usize, max_degree: u32) -> SparsePolynomial {
    let mut p = SparsePolynomial::zero(ring, mode, num_vars);
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_degree);
        let letters: Vec<u32> = (0..d).map(|_| rng.gen_range(1..=num_vars)).collect();
        let m = match mode {
            Mode::Commutative => slpforge::Monomial::from_exponents(letters.iter().map(|&v| (v, 1))),
            Mode::Noncommutative => slpforge::Monomial::word(letters),
        };
        let c = ring.from_i64(rng.gen_range(1..=5));
        p.add_term(m, c);
    }
    p
}

/// `p - p` as one program: `p` is run twice, with the first result negated
/// into a spare register.
pub fn zero_by_construction(p: &Slp) -> Slp {
    let ring = p.ring();
    let spare = p.registers();
    let mut b = slpforge::ir::ProgramBuilder::new();
    b.inline(p, |l| l.clone());
    b.apply(spare, Op::Mul, Operand::Reg(p.output()), Operand::Leaf(Leaf::Const(ring.from_i64(-1))));
    b.inline(p, |l| l.clone());
    b.apply(spare, Op::Add, Operand::Reg(spare), Operand::Reg(p.output()));
    b.finish(ring, p.mode(), p.num_vars(), spare).unwrap()
}
