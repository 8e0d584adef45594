//! Support sets of monotone circuits and the monomial-variable graph.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::coeffring::{Ring, Scalar};
use crate::error::{Error, Result};
use crate::families::{p_formula, FamilyParams};
use crate::ir::{Algebra, Caps, Circuit, Formula, LayeredCircuit, Mode, Monomial};

/// A set of monomials, without coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSet {
    pub mode: Mode,
    pub num_vars: u32,
    pub members: BTreeSet<Monomial>,
    pub degree_bound: u32,
}

impl MonomialSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.members.contains(m)
    }

    pub fn is_subset(&self, other: &MonomialSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection_len(&self, other: &MonomialSet) -> usize {
        self.members.intersection(&other.members).count()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.members.iter().flat_map(Monomial::variables).collect()
    }
}

/// Boolean-semiring interpretation: `+` is union, `*` is the pairwise
/// product of monomials.
struct SetAlgebra {
    mode: Mode,
    caps: Caps,
}

impl Algebra for SetAlgebra {
    type Value = BTreeSet<Monomial>;

    fn var(&self, i: u32) -> Result<Self::Value> {
        Ok(BTreeSet::from([Monomial::var(self.mode, i)]))
    }

    fn constant(&self, c: &Scalar) -> Result<Self::Value> {
        Ok(if c.is_zero() { BTreeSet::new() } else { BTreeSet::from([Monomial::one(self.mode)]) })
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        let s: BTreeSet<Monomial> = a.union(b).cloned().collect();
        if s.len() > self.caps.max_terms {
            return Err(Error::TermCapExceeded { cap: self.caps.max_terms });
        }
        Ok(s)
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        let da = a.iter().map(Monomial::degree).max().unwrap_or(0);
        let db = b.iter().map(Monomial::degree).max().unwrap_or(0);
        if da as u64 + db as u64 > self.caps.max_degree as u64 {
            return Err(Error::DegreeCapExceeded { cap: self.caps.max_degree, degree: da as u64 + db as u64 });
        }
        if a.len().saturating_mul(b.len()) > self.caps.max_terms.saturating_mul(16) {
            return Err(Error::TermCapExceeded { cap: self.caps.max_terms });
        }
        let mut s = BTreeSet::new();
        for x in a {
            for y in b {
                s.insert(x.mul(y));
            }
        }
        if s.len() > self.caps.max_terms {
            return Err(Error::TermCapExceeded { cap: self.caps.max_terms });
        }
        Ok(s)
    }
}

fn from_members(mode: Mode, num_vars: u32, members: BTreeSet<Monomial>) -> MonomialSet {
    let degree_bound = members.iter().map(Monomial::degree).max().unwrap_or(0);
    MonomialSet { mode, num_vars, members, degree_bound }
}

/// `mon(c)` computed without coefficients. Sound only for monotone circuits
/// (rational ring, nonnegative constants), where no cancellation occurs.
pub fn mon_set(c: &LayeredCircuit, caps: Caps) -> Result<MonomialSet> {
    if !c.is_monotone() {
        return Err(Error::NotMonotone(format!("{} has a negative constant or is not over Q", c.name())));
    }
    let members = c.interpret(&SetAlgebra { mode: c.mode(), caps })?;
    Ok(from_members(c.mode(), c.num_vars(), members))
}

/// `mon` of a formula with nonnegative constants.
pub fn formula_mon_set(f: &Formula, mode: Mode, num_vars: u32, caps: Caps) -> Result<MonomialSet> {
    let members = f.interpret(&SetAlgebra { mode, caps }, Ring::Rational)?;
    Ok(from_members(mode, num_vars, members))
}

/// A connected component of the monomial-variable graph, labelled by its
/// least variable (0 for the component of the constant monomial).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub label: u32,
    pub variables: Vec<u32>,
    pub monomials: Vec<usize>,
}

/// Bipartite graph with an edge `{x, m}` whenever `x` occurs in `m`.
#[derive(Clone, Debug)]
pub struct MonVarGraph {
    pub monomials: Vec<Monomial>,
    pub variables: Vec<u32>,
    /// `(variable, monomial index)`.
    pub edges: Vec<(u32, usize)>,
    pub components: Vec<Component>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn mon_var_graph(s: &MonomialSet) -> MonVarGraph {
    let monomials: Vec<Monomial> = s.members.iter().cloned().collect();
    let variables: Vec<u32> = s.variables().into_iter().collect();
    let var_index: BTreeMap<u32, usize> = variables.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    // nodes: monomials first, then variables
    let mut parent: Vec<usize> = (0..monomials.len() + variables.len()).collect();
    for (mi, m) in monomials.iter().enumerate() {
        for v in m.variables() {
            edges.push((v, mi));
            let (a, b) = (find(&mut parent, mi), find(&mut parent, monomials.len() + var_index[&v]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Component> = BTreeMap::new();
    for mi in 0..monomials.len() {
        let root = find(&mut parent, mi);
        groups.entry(root).or_insert(Component { label: 0, variables: vec![], monomials: vec![] }).monomials.push(mi);
    }
    for (vi, &v) in variables.iter().enumerate() {
        let root = find(&mut parent, monomials.len() + vi);
        groups.entry(root).or_insert(Component { label: 0, variables: vec![], monomials: vec![] }).variables.push(v);
    }
    let mut components: Vec<Component> = groups
        .into_values()
        .map(|mut c| {
            c.label = c.variables.first().copied().unwrap_or(0);
            c
        })
        .collect();
    components.sort_by_key(|c| c.label);
    MonVarGraph { monomials, variables, edges, components }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub contained: bool,
    pub circuit_monomials: usize,
    pub family_monomials: usize,
    pub common: usize,
    /// `common / family_monomials`.
    pub fraction: Ratio<u64>,
}

/// Containment of `mon(c)` in `mon(P^l_k)` and the fraction of
/// `mon(P^l_k)` covered.
pub fn coverage(c: &LayeredCircuit, params: FamilyParams, caps: Caps) -> Result<CoverageReport> {
    let mc = mon_set(c, caps)?;
    let mp = formula_mon_set(&p_formula(params), Mode::Commutative, params.num_vars(), caps)?;
    let common = mc.intersection_len(&mp);
    Ok(CoverageReport {
        contained: mc.is_subset(&mp),
        circuit_monomials: mc.len(),
        family_monomials: mp.len(),
        common,
        fraction: Ratio::new(common as u64, mp.len().max(1) as u64),
    })
}
