use super::{Algebra, Caps, CircuitBuilder, Expansion, GateKind, LayeredCircuit, Mode, SparsePolynomial};
use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};

/// Unbounded fan-in formula (a tree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Var(u32),
    Const(Scalar),
    Sum(Vec<Formula>),
    Product(Vec<Formula>),
}

impl Formula {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Formula::Var(_) | Formula::Const(_))
    }

    pub fn children(&self) -> &[Formula] {
        match self {
            Formula::Sum(c) | Formula::Product(c) => c,
            _ => &[],
        }
    }

    /// Leaves have depth 0.
    pub fn depth(&self) -> u32 {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Node count.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Formula::size).sum::<usize>()
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children().iter().map(Formula::leaf_count).sum()
        }
    }

    pub fn max_var(&self) -> u32 {
        match self {
            Formula::Var(i) => *i,
            Formula::Const(_) => 0,
            _ => self.children().iter().map(Formula::max_var).max().unwrap_or(0),
        }
    }

    /// Merges nested sums into sums and nested products into products.
    pub fn flattened(&self) -> Formula {
        match self {
            Formula::Sum(cs) => {
                let mut out = Vec::new();
                for c in cs.iter().map(Formula::flattened) {
                    match c {
                        Formula::Sum(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                Formula::Sum(out)
            }
            Formula::Product(cs) => {
                let mut out = Vec::new();
                for c in cs.iter().map(Formula::flattened) {
                    match c {
                        Formula::Product(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                Formula::Product(out)
            }
            leaf => leaf.clone(),
        }
    }

    /// Empty sums are 0 and empty products are 1. `ring` supplies those.
    pub fn interpret<A: Algebra>(&self, alg: &A, ring: Ring) -> Result<A::Value> {
        match self {
            Formula::Var(i) => alg.var(*i),
            Formula::Const(c) => alg.constant(c),
            Formula::Sum(cs) | Formula::Product(cs) => {
                let is_sum = matches!(self, Formula::Sum(_));
                let mut acc: Option<A::Value> = None;
                for c in cs {
                    let v = c.interpret(alg, ring)?;
                    acc = Some(match acc {
                        None => v,
                        Some(a) if is_sum => alg.add(&a, &v)?,
                        Some(a) => alg.mul(&a, &v)?,
                    });
                }
                match acc {
                    Some(v) => Ok(v),
                    None => alg.constant(&if is_sum { ring.zero() } else { ring.one() }),
                }
            }
        }
    }

    pub fn expand(&self, ring: Ring, mode: Mode, num_vars: u32, caps: Caps) -> Result<SparsePolynomial> {
        self.interpret(&Expansion::new(ring, mode, num_vars, caps), ring)
    }

    /// Layered circuit with the same gates, binarized left to right. An
    /// operand from an earlier internal layer is carried up by `* 1` copies.
    pub fn to_layered(&self, ring: Ring, mode: Mode, num_vars: u32, name: &str) -> Result<LayeredCircuit> {
        let mut b = CircuitBuilder::new(ring, mode, num_vars);
        let one = b.constant(ring.one());
        let (g, _) = self.layer_into(&mut b, ring, one);
        b.finish(name, g)
    }

    /// Returns the gate and its layer (1 for leaves).
    fn layer_into(&self, b: &mut CircuitBuilder, ring: Ring, one: u32) -> (u32, u32) {
        let (cs, is_sum) = match self {
            Formula::Var(i) => return (b.var(*i), 1),
            Formula::Const(c) if c.is_one() => return (one, 1),
            Formula::Const(c) => return (b.constant(c.clone()), 1),
            Formula::Sum(cs) => (cs, true),
            Formula::Product(cs) => (cs, false),
        };
        let lift = |b: &mut CircuitBuilder, (mut g, mut l): (u32, u32), to: u32| {
            if l > 1 {
                while l < to {
                    l += 1;
                    g = b.mul(l, g, one);
                }
            }
            g
        };
        let mut acc: Option<(u32, u32)> = None;
        for c in cs {
            let v = c.layer_into(b, ring, one);
            acc = Some(match acc {
                None => v,
                Some(a) => {
                    let top = a.1.max(v.1);
                    let (x, y) = (lift(b, a, top), lift(b, v, top));
                    let g = if is_sum { b.add(top + 1, x, y) } else { b.mul(top + 1, x, y) };
                    (g, top + 1)
                }
            });
        }
        acc.unwrap_or_else(|| {
            if is_sum {
                (b.constant(ring.zero()), 1)
            } else {
                (one, 1)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaNode {
    Var(u32),
    Const(Scalar),
    Sum(Vec<u32>),
    Product(Vec<u32>),
}

/// Node-list form of a formula, as read from external input. Children are
/// node indices; [`FormulaArena::to_tree`] rejects shared subterms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaArena {
    pub nodes: Vec<FormulaNode>,
    pub root: u32,
}

impl FormulaArena {
    /// Reads the part of `c` reachable from the output as a formula. Leaves
    /// are duplicated per use and copy gates `u * 1` are skipped, so only
    /// shared internal gates make `to_tree` fail.
    pub fn from_circuit(c: &LayeredCircuit) -> FormulaArena {
        let mut nodes = Vec::new();
        let mut ids = std::collections::HashMap::new();
        let root = Self::node_of(c, c.output(), &mut nodes, &mut ids);
        FormulaArena { nodes, root }
    }

    fn node_of(
        c: &LayeredCircuit,
        g: u32,
        nodes: &mut Vec<FormulaNode>,
        ids: &mut std::collections::HashMap<u32, u32>,
    ) -> u32 {
        let gate = c.gate(g).expect("validated circuit");
        if let Some(src) = c.copy_source(gate) {
            return Self::node_of(c, src, nodes, ids);
        }
        let node = match &gate.kind {
            GateKind::Var(i) => FormulaNode::Var(*i),
            GateKind::Const(s) => FormulaNode::Const(s.clone()),
            GateKind::Add(..) | GateKind::Mul(..) if ids.contains_key(&g) => {
                // a second parent: point at the existing node so to_tree reports it
                return ids[&g];
            }
            GateKind::Add(l, r) => {
                let kids = vec![Self::node_of(c, *l, nodes, ids), Self::node_of(c, *r, nodes, ids)];
                FormulaNode::Sum(kids)
            }
            GateKind::Mul(l, r) => {
                let kids = vec![Self::node_of(c, *l, nodes, ids), Self::node_of(c, *r, nodes, ids)];
                FormulaNode::Product(kids)
            }
        };
        nodes.push(node);
        let id = nodes.len() as u32 - 1;
        if !gate.kind.is_leaf() {
            ids.insert(g, id);
        }
        id
    }

    pub fn to_tree(&self) -> Result<Formula> {
        let mut parents = vec![0usize; self.nodes.len()];
        for n in &self.nodes {
            if let FormulaNode::Sum(cs) | FormulaNode::Product(cs) = n {
                for &c in cs {
                    let slot = parents
                        .get_mut(c as usize)
                        .ok_or_else(|| Error::Malformed(format!("child {c} out of range")))?;
                    *slot += 1;
                    if *slot > 1 {
                        return Err(Error::NotATree(c));
                    }
                }
            }
        }
        if self.root as usize >= self.nodes.len() {
            return Err(Error::Malformed(format!("root {} out of range", self.root)));
        }
        if parents[self.root as usize] > 0 {
            return Err(Error::NotATree(self.root));
        }
        let mut visiting = vec![false; self.nodes.len()];
        self.build(self.root, &mut visiting)
    }

    fn build(&self, id: u32, visiting: &mut [bool]) -> Result<Formula> {
        if visiting[id as usize] {
            return Err(Error::NotATree(id));
        }
        visiting[id as usize] = true;
        Ok(match &self.nodes[id as usize] {
            FormulaNode::Var(i) => Formula::Var(*i),
            FormulaNode::Const(c) => Formula::Const(c.clone()),
            FormulaNode::Sum(cs) => Formula::Sum(cs.iter().map(|&c| self.build(c, visiting)).collect::<Result<_>>()?),
            FormulaNode::Product(cs) => {
                Formula::Product(cs.iter().map(|&c| self.build(c, visiting)).collect::<Result<_>>()?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_roundtrip() {
        use crate::ir::Circuit;
        let ring = Ring::Rational;
        let f = Formula::Sum(vec![
            Formula::Product(vec![Formula::Var(1), Formula::Var(2), Formula::Var(3)]),
            Formula::Var(4),
            Formula::Const(ring.from_u64(2)),
        ]);
        let c = f.to_layered(ring, Mode::Commutative, 4, "f").unwrap();
        let caps = Caps::default();
        assert_eq!(c.expand(caps).unwrap(), f.expand(ring, Mode::Commutative, 4, caps).unwrap());
        let back = FormulaArena::from_circuit(&c).to_tree().unwrap();
        assert_eq!(back.flattened(), f);
    }

    #[test]
    fn shared_subterm_rejected() {
        let arena = FormulaArena {
            nodes: vec![FormulaNode::Var(1), FormulaNode::Sum(vec![0, 0])],
            root: 1,
        };
        assert_eq!(arena.to_tree(), Err(Error::NotATree(0)));
    }

    #[test]
    fn flatten_and_depth() {
        let f = Formula::Sum(vec![Formula::Sum(vec![Formula::Var(1), Formula::Var(2)]), Formula::Var(3)]);
        assert_eq!(f.depth(), 2);
        let g = f.flattened();
        assert_eq!(g.depth(), 1);
        assert_eq!(g.children().len(), 3);
        let ring = Ring::Rational;
        assert_eq!(
            f.expand(ring, Mode::Commutative, 3, Caps::default()).unwrap(),
            g.expand(ring, Mode::Commutative, 3, Caps::default()).unwrap()
        );
    }

    #[test]
    fn empty_nodes() {
        let ring = Ring::Rational;
        let z = Formula::Sum(vec![]).expand(ring, Mode::Commutative, 1, Caps::default()).unwrap();
        assert!(z.is_zero());
        let o = Formula::Product(vec![]).expand(ring, Mode::Commutative, 1, Caps::default()).unwrap();
        assert_eq!(o.constant_term(), ring.one());
    }
}
