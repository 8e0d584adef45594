use std::collections::HashMap;

use super::{Algebra, Caps, Circuit, Expansion, Mode};
use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateKind {
    Var(u32),
    Const(Scalar),
    Add(u32, u32),
    Mul(u32, u32),
}

impl GateKind {
    pub fn operands(&self) -> Option<(u32, u32)> {
        match self {
            GateKind::Add(l, r) | GateKind::Mul(l, r) => Some((*l, *r)),
            _ => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.operands().is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub id: u32,
    pub layer: u32,
    pub kind: GateKind,
}

/// A layered circuit: leaves in layer 1, and every gate of layer `i > 1`
/// reads only from layer 1 or layer `i - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredCircuit {
    name: String,
    ring: Ring,
    mode: Mode,
    num_vars: u32,
    gates: Vec<Gate>,
    index: HashMap<u32, usize>,
    output: u32,
}

/// Structural summary produced by [`LayeredCircuit::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub width: usize,
    pub size: usize,
    pub layers: u32,
    pub staggered: bool,
    pub monotone: bool,
    /// Per gate id, `Some(d)` when the gate computes a homogeneous
    /// polynomial of degree `d`. `None` when expansion exceeded the caps.
    pub homogeneity: Option<Vec<(u32, Option<u32>)>>,
}

impl LayeredCircuit {
    /// Validates and freezes a gate list. Gates may be given in any order.
    pub fn new(
        name: impl Into<String>,
        ring: Ring,
        mode: Mode,
        num_vars: u32,
        mut gates: Vec<Gate>,
        output: u32,
    ) -> Result<Self> {
        gates.sort_by_key(|g| g.layer);
        let mut index = HashMap::with_capacity(gates.len());
        for (pos, g) in gates.iter().enumerate() {
            if index.insert(g.id, pos).is_some() {
                return Err(Error::Malformed(format!("duplicate gate id {}", g.id)));
            }
        }
        for g in &gates {
            match &g.kind {
                GateKind::Var(i) => {
                    if g.layer != 1 {
                        return Err(Error::Malformed(format!("leaf {} not in layer 1", g.id)));
                    }
                    if *i == 0 || *i > num_vars {
                        return Err(Error::Malformed(format!("gate {} reads x{i}, only {num_vars} variables", g.id)));
                    }
                }
                GateKind::Const(c) => {
                    if g.layer != 1 {
                        return Err(Error::Malformed(format!("leaf {} not in layer 1", g.id)));
                    }
                    if c.ring() != ring {
                        return Err(Error::RingMismatch(ring.to_string(), c.ring().to_string()));
                    }
                }
                GateKind::Add(l, r) | GateKind::Mul(l, r) => {
                    if g.layer < 2 {
                        return Err(Error::Malformed(format!("internal gate {} in layer {}", g.id, g.layer)));
                    }
                    for &o in [l, r] {
                        let Some(&pos) = index.get(&o) else {
                            return Err(Error::Malformed(format!("gate {} reads undefined gate {o}", g.id)));
                        };
                        let ol = gates[pos].layer;
                        if ol != 1 && ol + 1 != g.layer {
                            return Err(Error::BadOperandLayer {
                                gate: g.id,
                                layer: g.layer,
                                operand: o,
                                operand_layer: ol,
                            });
                        }
                    }
                }
            }
        }
        if !index.contains_key(&output) {
            return Err(Error::DanglingOutput(output.to_string()));
        }
        Ok(LayeredCircuit { name: name.into(), ring, mode, num_vars, gates, index, output })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: u32) -> Option<&Gate> {
        self.index.get(&id).map(|&p| &self.gates[p])
    }

    pub fn output(&self) -> u32 {
        self.output
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn depth(&self) -> u32 {
        self.gates.last().map_or(1, |g| g.layer)
    }

    /// Gates of one layer in stored order.
    pub fn layer(&self, i: u32) -> impl Iterator<Item = &Gate> {
        self.gates.iter().filter(move |g| g.layer == i)
    }

    /// `max_{i>1} |V_i|`, 0 when there are no internal layers.
    pub fn width(&self) -> usize {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for g in self.gates.iter().filter(|g| g.layer > 1) {
            *counts.entry(g.layer).or_default() += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// Rational ring and every constant nonnegative.
    pub fn is_monotone(&self) -> bool {
        self.ring == Ring::Rational
            && self.gates.iter().all(|g| match &g.kind {
                GateKind::Const(c) => c.is_nonnegative(),
                _ => true,
            })
    }

    fn is_one_leaf(&self, id: u32) -> bool {
        matches!(self.gate(id), Some(Gate { kind: GateKind::Const(c), .. }) if c.is_one())
    }

    /// `Some(u)` when `g` has the copy shape `u * 1` with `u` in the previous
    /// layer.
    pub fn copy_source(&self, g: &Gate) -> Option<u32> {
        let GateKind::Mul(l, r) = g.kind else { return None };
        let prev = |id: u32| self.gate(id).is_some_and(|o| o.layer + 1 == g.layer);
        if self.is_one_leaf(r) && prev(l) {
            Some(l)
        } else if self.is_one_leaf(l) && prev(r) {
            Some(r)
        } else {
            None
        }
    }

    /// Every internal layer has at most one gate that is not a copy.
    pub fn is_staggered(&self) -> bool {
        let mut real: HashMap<u32, usize> = HashMap::new();
        for g in self.gates.iter().filter(|g| g.layer > 1) {
            if self.copy_source(g).is_none() {
                let c = real.entry(g.layer).or_default();
                *c += 1;
                if *c > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Positions (into [`Self::gates`]) of gates the output depends on.
    pub fn reachable(&self) -> Vec<bool> {
        let mut live = vec![false; self.gates.len()];
        live[self.index[&self.output]] = true;
        for pos in (0..self.gates.len()).rev() {
            if !live[pos] {
                continue;
            }
            if let Some((l, r)) = self.gates[pos].kind.operands() {
                live[self.index[&l]] = true;
                live[self.index[&r]] = true;
            }
        }
        live
    }

    /// The circuit restricted to gates the output depends on.
    pub fn pruned(&self) -> LayeredCircuit {
        let live = self.reachable();
        let gates = self.gates.iter().zip(&live).filter(|(_, &l)| l).map(|(g, _)| g.clone()).collect();
        LayeredCircuit::new(self.name.clone(), self.ring, self.mode, self.num_vars, gates, self.output)
            .expect("pruning keeps a valid circuit")
    }

    /// Values of the selected gates (by position); unselected entries are
    /// `None`.
    fn run<A: Algebra>(&self, alg: &A, select: &[bool]) -> Result<Vec<Option<A::Value>>> {
        let mut vals: Vec<Option<A::Value>> = vec![None; self.gates.len()];
        for (pos, g) in self.gates.iter().enumerate() {
            if !select[pos] {
                continue;
            }
            let v = match &g.kind {
                GateKind::Var(i) => alg.var(*i)?,
                GateKind::Const(c) => alg.constant(c)?,
                GateKind::Add(l, r) | GateKind::Mul(l, r) => {
                    let a = vals[self.index[l]].as_ref().expect("operand evaluated");
                    let b = vals[self.index[r]].as_ref().expect("operand evaluated");
                    if matches!(g.kind, GateKind::Add(..)) {
                        alg.add(a, b)?
                    } else {
                        alg.mul(a, b)?
                    }
                }
            };
            vals[pos] = Some(v);
        }
        Ok(vals)
    }

    /// Every gate's value, in stored order.
    pub fn gate_values<A: Algebra>(&self, alg: &A) -> Result<Vec<A::Value>> {
        let all = vec![true; self.gates.len()];
        Ok(self.run(alg, &all)?.into_iter().map(|v| v.expect("all evaluated")).collect())
    }

    pub fn validate(&self, caps: Caps) -> ValidationReport {
        let alg = Expansion::new(self.ring, self.mode, self.num_vars, caps);
        let homogeneity = self.gate_values(&alg).ok().map(|vals| {
            self.gates
                .iter()
                .zip(vals)
                .map(|(g, p)| (g.id, p.is_homogeneous().then(|| p.degree())))
                .collect()
        });
        ValidationReport {
            width: self.width(),
            size: self.size(),
            layers: self.depth(),
            staggered: self.is_staggered(),
            monotone: self.is_monotone(),
            homogeneity,
        }
    }
}

impl Circuit for LayeredCircuit {
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
        let live = self.reachable();
        let mut vals = self.run(alg, &live)?;
        Ok(vals[self.index[&self.output]].take().expect("output evaluated"))
    }
}

/// Incremental construction of a [`LayeredCircuit`] with automatic gate ids.
pub struct CircuitBuilder {
    ring: Ring,
    mode: Mode,
    num_vars: u32,
    gates: Vec<Gate>,
    next: u32,
}

impl CircuitBuilder {
    pub fn new(ring: Ring, mode: Mode, num_vars: u32) -> Self {
        CircuitBuilder { ring, mode, num_vars, gates: Vec::new(), next: 1 }
    }

    fn push(&mut self, layer: u32, kind: GateKind) -> u32 {
        let id = self.next;
        self.next += 1;
        self.gates.push(Gate { id, layer, kind });
        id
    }

    pub fn var(&mut self, i: u32) -> u32 {
        self.push(1, GateKind::Var(i))
    }

    pub fn constant(&mut self, c: Scalar) -> u32 {
        self.push(1, GateKind::Const(c))
    }

    pub fn add(&mut self, layer: u32, l: u32, r: u32) -> u32 {
        self.push(layer, GateKind::Add(l, r))
    }

    pub fn mul(&mut self, layer: u32, l: u32, r: u32) -> u32 {
        self.push(layer, GateKind::Mul(l, r))
    }

    pub fn finish(self, name: &str, output: u32) -> Result<LayeredCircuit> {
        LayeredCircuit::new(name, self.ring, self.mode, self.num_vars, self.gates, output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Monomial, SparsePolynomial};

    fn demo() -> LayeredCircuit {
        let ring = Ring::default_prime();
        let mut b = CircuitBuilder::new(ring, Mode::Commutative, 4);
        let x: Vec<u32> = (1..=4).map(|i| b.var(i)).collect();
        let p = b.mul(2, x[0], x[1]);
        let q = b.mul(2, x[2], x[3]);
        let s = b.add(3, p, q);
        b.finish("demo", s).unwrap()
    }

    #[test]
    fn single_leaf_has_width_zero() {
        let mut b = CircuitBuilder::new(Ring::Rational, Mode::Commutative, 1);
        let x = b.var(1);
        let c = b.finish("leaf", x).unwrap();
        let r = c.validate(Caps::default());
        assert_eq!((r.width, r.size, r.staggered), (0, 1, true));
    }

    #[test]
    fn width_and_evaluation() {
        let c = demo();
        let r = c.validate(Caps::default());
        assert_eq!(r.width, 2);
        assert_eq!(r.size, 7);
        assert!(!r.staggered);
        assert!(!r.monotone);
        let ring = c.ring();
        let pt: Vec<_> = (1..=4).map(|v| ring.from_u64(v)).collect();
        assert_eq!(c.evaluate(&pt).unwrap(), ring.from_u64(14));
        assert!(matches!(c.evaluate(&pt[..3]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn layer_rules() {
        let ring = Ring::Rational;
        let mut b = CircuitBuilder::new(ring, Mode::Commutative, 2);
        let x = b.var(1);
        let y = b.var(2);
        let g2 = b.add(2, x, y);
        let g3 = b.mul(3, g2, x);
        let _ok = b.mul(4, g3, y);
        assert!(b.finish("ok", 5).is_ok());

        let mut b = CircuitBuilder::new(ring, Mode::Commutative, 2);
        let x = b.var(1);
        let y = b.var(2);
        let g2 = b.add(2, x, y);
        let g3 = b.mul(3, g2, x);
        let bad = b.mul(4, g2, g3);
        assert!(matches!(b.finish("bad", bad), Err(Error::BadOperandLayer { gate: 5, operand: 3, .. })));
    }

    #[test]
    fn dangling_output() {
        let mut b = CircuitBuilder::new(Ring::Rational, Mode::Commutative, 1);
        b.var(1);
        assert!(matches!(b.finish("d", 9), Err(Error::DanglingOutput(_))));
    }

    #[test]
    fn noncommutative_expansion_keeps_order() {
        let ring = Ring::Rational;
        let mut b = CircuitBuilder::new(ring, Mode::Noncommutative, 2);
        let x0 = b.var(1);
        let x1 = b.var(2);
        let g = b.mul(2, x0, x1);
        let c = b.finish("w", g).unwrap();
        let e = c.expand(Caps::default()).unwrap();
        let expect = SparsePolynomial::from_terms(ring, Mode::Noncommutative, 2, [(Monomial::word([1, 2]), ring.one())]);
        assert_eq!(e, expect);
    }

    #[test]
    fn coefficients_accumulate() {
        let ring = Ring::Rational;
        let mut b = CircuitBuilder::new(ring, Mode::Commutative, 1);
        let x = b.var(1);
        let g = b.add(2, x, x);
        let e = b.finish("2x", g).unwrap().expand(Caps::default()).unwrap();
        assert_eq!(e.coeff(&Monomial::var(Mode::Commutative, 1)), ring.from_u64(2));
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn homogeneity_report() {
        let ring = Ring::Rational;
        let mut b = CircuitBuilder::new(ring, Mode::Commutative, 1);
        let x = b.var(1);
        let one = b.constant(ring.one());
        let g = b.add(2, x, one);
        let c = b.finish("h", g).unwrap();
        let h = c.validate(Caps::default()).homogeneity.unwrap();
        assert_eq!(h, vec![(1, Some(1)), (2, Some(0)), (3, None)]);
        assert!(c.validate(Caps::default()).monotone);
    }
}
