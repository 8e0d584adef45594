use std::collections::HashMap;

use super::{Algebra, CircuitBuilder, GateKind, LayeredCircuit, Mode};
use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::ir::Circuit;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Leaf {
    Var(u32),
    Const(Scalar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Reg(usize),
    Leaf(Leaf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instr {
    Load { dst: usize, leaf: Leaf },
    Apply { dst: usize, op: Op, lhs: Operand, rhs: Operand },
}

impl Instr {
    pub fn dst(&self) -> usize {
        match self {
            Instr::Load { dst, .. } | Instr::Apply { dst, .. } => *dst,
        }
    }
}

/// A register program. Apply operands may be registers or leaves: a leaf
/// operand is a direct read of layer 1 in the staggered-circuit picture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slp {
    ring: Ring,
    mode: Mode,
    num_vars: u32,
    registers: usize,
    steps: Vec<Instr>,
    output: usize,
}

impl Slp {
    pub fn new(ring: Ring, mode: Mode, num_vars: u32, registers: usize, steps: Vec<Instr>, output: usize) -> Result<Self> {
        let mut written = vec![false; registers];
        let check_leaf = |leaf: &Leaf| -> Result<()> {
            match leaf {
                Leaf::Var(i) if *i == 0 || *i > num_vars => {
                    Err(Error::Malformed(format!("x{i} out of range, {num_vars} variables")))
                }
                Leaf::Const(c) if c.ring() != ring => Err(Error::RingMismatch(ring.to_string(), c.ring().to_string())),
                _ => Ok(()),
            }
        };
        for (t, s) in steps.iter().enumerate() {
            match s {
                Instr::Load { leaf, .. } => check_leaf(leaf)?,
                Instr::Apply { lhs, rhs, .. } => {
                    for o in [lhs, rhs] {
                        match o {
                            Operand::Reg(r) => {
                                if !written.get(*r).copied().unwrap_or(false) {
                                    return Err(Error::Malformed(format!("step {t} reads unwritten register {r}")));
                                }
                            }
                            Operand::Leaf(l) => check_leaf(l)?,
                        }
                    }
                }
            }
            let d = s.dst();
            if d >= registers {
                return Err(Error::Malformed(format!("step {t} writes register {d}, only {registers}")));
            }
            written[d] = true;
        }
        if !written.get(output).copied().unwrap_or(false) {
            return Err(Error::DanglingOutput(format!("register {output}")));
        }
        Ok(Slp { ring, mode, num_vars, registers, steps, output })
    }

    pub fn constant(ring: Ring, mode: Mode, num_vars: u32, c: Scalar) -> Self {
        Slp::new(ring, mode, num_vars, 1, vec![Instr::Load { dst: 0, leaf: Leaf::Const(c) }], 0)
            .expect("single load is valid")
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn steps(&self) -> &[Instr] {
        &self.steps
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Registers that are actually written.
    pub fn used_registers(&self) -> usize {
        let mut w = vec![false; self.registers];
        for s in &self.steps {
            w[s.dst()] = true;
        }
        w.iter().filter(|&&b| b).count()
    }

    /// Rewrites every leaf (in loads and operands).
    pub fn map_leaves(&self, num_vars: u32, f: impl Fn(&Leaf) -> Leaf) -> Result<Slp> {
        let op = |o: &Operand| match o {
            Operand::Leaf(l) => Operand::Leaf(f(l)),
            r => r.clone(),
        };
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                Instr::Load { dst, leaf } => Instr::Load { dst: *dst, leaf: f(leaf) },
                Instr::Apply { dst, op: o, lhs, rhs } => Instr::Apply { dst: *dst, op: *o, lhs: op(lhs), rhs: op(rhs) },
            })
            .collect();
        Slp::new(self.ring, self.mode, num_vars, self.registers, steps, self.output)
    }

    /// The equivalent staggered circuit: layer 1 holds the distinct leaves
    /// and a shared `1`; step `t` becomes layer `t + 2`, where every other
    /// live register is carried over as `u * 1`.
    pub fn to_staggered_circuit(&self, name: &str) -> LayeredCircuit {
        let mut b = CircuitBuilder::new(self.ring, self.mode, self.num_vars);
        let mut leaves: HashMap<Leaf, u32> = HashMap::new();
        let one_leaf = Leaf::Const(self.ring.one());
        let mut leaf_id = |b: &mut CircuitBuilder, l: &Leaf| -> u32 {
            *leaves.entry(l.clone()).or_insert_with(|| match l {
                Leaf::Var(i) => b.var(*i),
                Leaf::Const(c) => b.constant(c.clone()),
            })
        };
        for s in &self.steps {
            match s {
                Instr::Load { leaf, .. } => {
                    leaf_id(&mut b, leaf);
                }
                Instr::Apply { lhs, rhs, .. } => {
                    for o in [lhs, rhs] {
                        if let Operand::Leaf(l) = o {
                            leaf_id(&mut b, l);
                        }
                    }
                }
            }
        }
        let one = leaf_id(&mut b, &one_leaf);

        let mut cur: Vec<Option<u32>> = vec![None; self.registers];
        for (t, s) in self.steps.iter().enumerate() {
            let layer = t as u32 + 2;
            let mut next = vec![None; self.registers];
            let dst = s.dst();
            for (r, g) in cur.iter().enumerate() {
                if let (Some(g), true) = (g, r != dst) {
                    next[r] = Some(b.mul(layer, *g, one));
                }
            }
            let operand = |o: &Operand| -> u32 {
                match o {
                    Operand::Reg(r) => cur[*r].expect("validated read"),
                    Operand::Leaf(l) => leaves[l],
                }
            };
            let g = match s {
                Instr::Load { leaf, .. } => b.mul(layer, leaves[leaf], one),
                Instr::Apply { op, lhs, rhs, .. } => {
                    let l = operand(lhs);
                    let r = operand(rhs);
                    match op {
                        Op::Add => b.add(layer, l, r),
                        Op::Mul => b.mul(layer, l, r),
                    }
                }
            };
            next[dst] = Some(g);
            cur = next;
        }
        let out = cur[self.output].expect("output written");
        b.finish(name, out).expect("staggered construction is valid")
    }

    /// Inverse of [`Slp::to_staggered_circuit`] for any staggered circuit:
    /// copies keep their register, the one real gate per layer is written to
    /// a register nothing in the layer still needs.
    pub fn from_staggered(c: &LayeredCircuit) -> Result<Slp> {
        if !c.is_staggered() {
            return Err(Error::NotStaggered(format!("circuit {}", c.name())));
        }
        let c = c.pruned();
        let ring = c.ring();
        let leaf_of = |id: u32| -> Option<Leaf> {
            match &c.gate(id)?.kind {
                GateKind::Var(i) => Some(Leaf::Var(*i)),
                GateKind::Const(s) => Some(Leaf::Const(s.clone())),
                _ => None,
            }
        };
        if let Some(l) = leaf_of(c.output()) {
            return Ok(Slp::new(ring, c.mode(), c.num_vars(), 1, vec![Instr::Load { dst: 0, leaf: l }], 0)?);
        }

        let mut steps = Vec::new();
        let mut registers = 0usize;
        let mut reg_of: HashMap<u32, usize> = HashMap::new();
        for layer in 2..=c.depth() {
            let gates: Vec<_> = c.layer(layer).cloned().collect();
            let mut claimed: Vec<bool> = vec![false; registers];
            let mut new_reg: HashMap<u32, usize> = HashMap::new();
            let mut pending = Vec::new();
            for g in &gates {
                match c.copy_source(g) {
                    Some(u) if reg_of.contains_key(&u) && !claimed[reg_of[&u]] => {
                        claimed[reg_of[&u]] = true;
                        new_reg.insert(g.id, reg_of[&u]);
                    }
                    _ => pending.push(g.clone()),
                }
            }
            let reads = |g: &super::Gate| -> Vec<usize> {
                let (l, r) = g.kind.operands().expect("internal gate");
                [l, r].iter().filter_map(|o| reg_of.get(o).copied()).collect()
            };
            // Gates that read registers go first so leaf-only gates can
            // reuse whatever those reads release.
            pending.sort_by_key(|g| reads(g).is_empty());
            for (k, g) in pending.iter().enumerate() {
                let later_reads: Vec<usize> = pending[k + 1..].iter().flat_map(|h| reads(h)).collect();
                let dst = match (0..registers).find(|r| !claimed[*r] && !later_reads.contains(r)) {
                    Some(r) => r,
                    None => {
                        registers += 1;
                        claimed.push(false);
                        registers - 1
                    }
                };
                claimed[dst] = true;
                let (l, r) = g.kind.operands().expect("internal gate");
                let operand = |o: u32| -> Operand {
                    match reg_of.get(&o) {
                        Some(&reg) => Operand::Reg(reg),
                        None => Operand::Leaf(leaf_of(o).expect("operand is a leaf")),
                    }
                };
                let op = if matches!(g.kind, GateKind::Add(..)) { Op::Add } else { Op::Mul };
                let instr = match (c.copy_source(g).and_then(leaf_of), op) {
                    (Some(leaf), _) => Instr::Load { dst, leaf },
                    _ => Instr::Apply { dst, op, lhs: operand(l), rhs: operand(r) },
                };
                steps.push(instr);
                new_reg.insert(g.id, dst);
            }
            reg_of = new_reg;
        }
        let out = reg_of[&c.output()];
        Slp::new(ring, c.mode(), c.num_vars(), registers, steps, out)
    }

    /// `from_staggered` when the circuit already is staggered, otherwise the
    /// general staggering transform.
    pub fn program_of(c: &LayeredCircuit) -> Result<Slp> {
        if c.is_staggered() {
            Slp::from_staggered(c)
        } else {
            crate::transforms::staggerize(c)
        }
    }
}

impl Circuit for Slp {
    fn ring(&self) -> Ring {
        self.ring
    }

    fn mode(&self) -> Mode {
        self.mode
    }

    fn num_vars(&self) -> u32 {
        self.num_vars
    }

    fn interpret<A: Algebra>(&self, alg: &A) -> Result<A::Value> {
        let leaf = |l: &Leaf| match l {
            Leaf::Var(i) => alg.var(*i),
            Leaf::Const(c) => alg.constant(c),
        };
        let mut regs: Vec<Option<A::Value>> = vec![None; self.registers];
        for s in &self.steps {
            let v = match s {
                Instr::Load { leaf: l, .. } => leaf(l)?,
                Instr::Apply { op, lhs, rhs, .. } => {
                    let get = |o: &Operand| -> Result<A::Value> {
                        match o {
                            Operand::Reg(r) => Ok(regs[*r].clone().expect("validated read")),
                            Operand::Leaf(l) => leaf(l),
                        }
                    };
                    let (a, b) = (get(lhs)?, get(rhs)?);
                    match op {
                        Op::Add => alg.add(&a, &b)?,
                        Op::Mul => alg.mul(&a, &b)?,
                    }
                }
            };
            regs[s.dst()] = Some(v);
        }
        Ok(regs[self.output].take().expect("output written"))
    }
}

/// Accumulates instructions for composite programs and tracks the highest
/// register touched.
#[derive(Clone, Debug, Default)]
pub struct ProgramBuilder {
    steps: Vec<Instr>,
    registers: usize,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, s: Instr) {
        let mut touch = s.dst();
        if let Instr::Apply { lhs, rhs, .. } = &s {
            for o in [lhs, rhs] {
                if let Operand::Reg(r) = o {
                    touch = touch.max(*r);
                }
            }
        }
        self.registers = self.registers.max(touch + 1);
        self.steps.push(s);
    }

    pub fn load(&mut self, dst: usize, leaf: Leaf) {
        self.push(Instr::Load { dst, leaf });
    }

    pub fn apply(&mut self, dst: usize, op: Op, lhs: Operand, rhs: Operand) {
        self.push(Instr::Apply { dst, op, lhs, rhs });
    }

    /// Appends `p` with every leaf passed through `f` (registers unchanged).
    pub fn inline(&mut self, p: &Slp, f: impl Fn(&Leaf) -> Leaf) {
        let op = |o: &Operand| match o {
            Operand::Leaf(l) => Operand::Leaf(f(l)),
            r => r.clone(),
        };
        for s in p.steps() {
            self.push(match s {
                Instr::Load { dst, leaf } => Instr::Load { dst: *dst, leaf: f(leaf) },
                Instr::Apply { dst, op: o, lhs, rhs } => Instr::Apply { dst: *dst, op: *o, lhs: op(lhs), rhs: op(rhs) },
            });
        }
    }

    pub fn steps(&self) -> &[Instr] {
        &self.steps
    }

    pub fn finish(self, ring: Ring, mode: Mode, num_vars: u32, output: usize) -> Result<Slp> {
        let regs = self.registers.max(output + 1);
        Slp::new(ring, mode, num_vars, regs, self.steps, output)
    }
}

pub fn reg(r: usize) -> Operand {
    Operand::Reg(r)
}
