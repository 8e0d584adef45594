use std::collections::HashMap;

use super::{Algebra, Circuit, Mode};
use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};

/// `c0 + sum c_i x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Scalar,
    pub terms: Vec<(u32, Scalar)>,
}

impl LinearForm {
    pub fn var(ring: Ring, i: u32) -> Self {
        LinearForm { constant: ring.zero(), terms: vec![(i, ring.one())] }
    }

    fn interpret<A: Algebra>(&self, alg: &A) -> Result<A::Value> {
        let mut acc = if self.constant.is_zero() && !self.terms.is_empty() { None } else { Some(alg.constant(&self.constant)?) };
        for (i, c) in &self.terms {
            let x = alg.var(*i)?;
            let t = if c.is_one() { x } else { alg.mul(&alg.constant(c)?, &x)? };
            acc = Some(match acc {
                None => t,
                Some(a) => alg.add(&a, &t)?,
            });
        }
        Ok(acc.expect("label has a constant or a term"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbpEdge {
    pub from: u32,
    pub to: u32,
    pub label: LinearForm,
}

/// Algebraic branching program: a layered DAG from a single source to a
/// single sink whose value is the sum over paths of the product of labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abp {
    name: String,
    ring: Ring,
    mode: Mode,
    num_vars: u32,
    vertices: Vec<(u32, u32)>,
    edges: Vec<AbpEdge>,
    source: u32,
    sink: u32,
}

impl Abp {
    pub fn new(
        name: impl Into<String>,
        ring: Ring,
        mode: Mode,
        num_vars: u32,
        mut vertices: Vec<(u32, u32)>,
        edges: Vec<AbpEdge>,
        source: u32,
        sink: u32,
    ) -> Result<Self> {
        vertices.sort_by_key(|&(_, l)| l);
        let mut layer: HashMap<u32, u32> = HashMap::new();
        for &(v, l) in &vertices {
            if layer.insert(v, l).is_some() {
                return Err(Error::Malformed(format!("duplicate vertex {v}")));
            }
        }
        let mut indeg: HashMap<u32, usize> = HashMap::new();
        let mut outdeg: HashMap<u32, usize> = HashMap::new();
        for e in &edges {
            let (Some(&lf), Some(&lt)) = (layer.get(&e.from), layer.get(&e.to)) else {
                return Err(Error::Malformed(format!("edge {} -> {} names an unknown vertex", e.from, e.to)));
            };
            if lf + 1 != lt {
                return Err(Error::Malformed(format!("edge {} -> {} skips layers", e.from, e.to)));
            }
            for c in std::iter::once(&e.label.constant).chain(e.label.terms.iter().map(|(_, c)| c)) {
                if c.ring() != ring {
                    return Err(Error::RingMismatch(ring.to_string(), c.ring().to_string()));
                }
            }
            if let Some(&(i, _)) = e.label.terms.iter().find(|&&(i, _)| i == 0 || i > num_vars) {
                return Err(Error::Malformed(format!("label reads x{i}, only {num_vars} variables")));
            }
            *outdeg.entry(e.from).or_default() += 1;
            *indeg.entry(e.to).or_default() += 1;
        }
        let max_layer = vertices.last().map_or(0, |&(_, l)| l);
        match (layer.get(&source), layer.get(&sink)) {
            (Some(0), Some(&l)) if l == max_layer => {}
            _ => return Err(Error::Malformed("source must sit in layer 0 and sink in the last layer".into())),
        }
        for &(v, _) in &vertices {
            let no_in = !indeg.contains_key(&v);
            let no_out = !outdeg.contains_key(&v);
            if (no_in && v != source) || (no_out && v != sink) {
                return Err(Error::Malformed(format!("vertex {v} is a second source or sink")));
            }
        }
        Ok(Abp { name: name.into(), ring, mode, num_vars, vertices, edges, source, sink })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[(u32, u32)] {
        &self.vertices
    }

    pub fn edges(&self) -> &[AbpEdge] {
        &self.edges
    }

    pub fn source(&self) -> u32 {
        self.source
    }

    pub fn sink(&self) -> u32 {
        self.sink
    }

    /// Vertex count.
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Explicit path enumeration; exponential, intended for tiny instances.
    pub fn path_sum<A: Algebra>(&self, alg: &A) -> Result<A::Value> {
        fn walk<A: Algebra>(abp: &Abp, alg: &A, v: u32, acc: A::Value, total: &mut Option<A::Value>) -> Result<()> {
            if v == abp.sink {
                *total = Some(match total.take() {
                    None => acc,
                    Some(t) => alg.add(&t, &acc)?,
                });
                return Ok(());
            }
            for e in abp.edges.iter().filter(|e| e.from == v) {
                let next = alg.mul(&acc, &e.label.interpret(alg)?)?;
                walk(abp, alg, e.to, next, total)?;
            }
            Ok(())
        }
        let mut total = None;
        walk(self, alg, self.source, alg.constant(&self.ring.one())?, &mut total)?;
        match total {
            Some(t) => Ok(t),
            None => alg.constant(&self.ring.zero()),
        }
    }
}

impl Circuit for Abp {
    fn ring(&self) -> Ring {
        self.ring
    }

    fn mode(&self) -> Mode {
        self.mode
    }

    fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Layer-by-layer dynamic programme: `val(v) = sum val(u) * label(u, v)`.
    fn interpret<A: Algebra>(&self, alg: &A) -> Result<A::Value> {
        let mut val: HashMap<u32, A::Value> = HashMap::new();
        val.insert(self.source, alg.constant(&self.ring.one())?);
        let mut incoming: HashMap<u32, Vec<&AbpEdge>> = HashMap::new();
        for e in &self.edges {
            incoming.entry(e.to).or_default().push(e);
        }
        for &(v, _) in &self.vertices {
            if v == self.source {
                continue;
            }
            let mut acc: Option<A::Value> = None;
            for e in incoming.get(&v).into_iter().flatten() {
                let t = alg.mul(&val[&e.from], &e.label.interpret(alg)?)?;
                acc = Some(match acc {
                    None => t,
                    Some(a) => alg.add(&a, &t)?,
                });
            }
            val.insert(v, acc.expect("every non-source vertex has an in-edge"));
        }
        Ok(val.remove(&self.sink).expect("sink evaluated"))
    }
}
