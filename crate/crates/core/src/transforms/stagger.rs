use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::ir::{GateKind, Instr, LayeredCircuit, Leaf, Op, Operand, Slp};

/// The multigraph of one layer transition. Vertices are the gates of layer
/// `i`; each gate of layer `i + 1` reading one or two of them is an edge (a
/// self-loop when it reads one vertex, or the same vertex twice). Gates of
/// layer `i + 1` that read only leaves are counted in `constant_gates`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerMultigraph {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub constant_gates: usize,
}

impl LayerMultigraph {
    /// `max{|V|, |E| + 1, |E| + |V'|}`.
    pub fn bound(&self) -> usize {
        let e = self.edges.len();
        self.vertices.len().max(e + 1).max(e + self.constant_gates)
    }
}

/// Edge removal order for one layer transition, with the number of live
/// values after each step: removed edges plus vertices that still have an
/// edge. `constant_census` continues the count while the leaf-only gates are
/// computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSchedule {
    pub order: Vec<usize>,
    pub initial: usize,
    pub census: Vec<usize>,
    pub constant_census: Vec<usize>,
}

impl EdgeSchedule {
    pub fn peak(&self) -> usize {
        self.census.iter().chain(&self.constant_census).copied().fold(self.initial, usize::max)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Whether `a` and `b` are connected using the edges in `live` except `skip`.
fn connected_without(edges: &[(u32, u32)], live: &BTreeSet<usize>, skip: usize, a: u32, b: u32) -> bool {
    let mut seen = BTreeSet::from([a]);
    let mut stack = vec![a];
    while let Some(v) = stack.pop() {
        if v == b {
            return true;
        }
        for &e in live {
            if e == skip {
                continue;
            }
            let (p, q) = edges[e];
            let other = if p == v {
                q
            } else if q == v {
                p
            } else {
                continue;
            };
            if seen.insert(other) {
                stack.push(other);
            }
        }
    }
    false
}

/// Orders the edges so that the live-value census stays within
/// [`LayerMultigraph::bound`]: tree components first, then the rest, each in
/// ascending order of its smallest vertex. Inside a component a non-cut edge
/// is removed while one exists, otherwise the edge at the smallest leaf.
/// Ties go to the smallest endpoint, then the smallest edge index.
pub fn order_edges(g: &LayerMultigraph) -> EdgeSchedule {
    let pos: HashMap<u32, usize> = g.vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut uf = UnionFind((0..g.vertices.len()).collect());
    for &(a, b) in &g.edges {
        uf.union(pos[&a], pos[&b]);
    }
    let mut comps: HashMap<usize, (Vec<u32>, Vec<usize>)> = HashMap::new();
    for (e, &(a, _)) in g.edges.iter().enumerate() {
        comps.entry(uf.find(pos[&a])).or_default().1.push(e);
    }
    for &v in &g.vertices {
        let root = uf.find(pos[&v]);
        if let Some(c) = comps.get_mut(&root) {
            c.0.push(v);
        }
    }
    let mut comps: Vec<(Vec<u32>, Vec<usize>)> = comps.into_values().collect();
    comps.sort_by_key(|(vs, es)| (es.len() >= vs.len(), *vs.iter().min().expect("non-empty component")));

    let mut degree: HashMap<u32, usize> = HashMap::new();
    for &(a, b) in &g.edges {
        *degree.entry(a).or_default() += 1;
        if b != a {
            *degree.entry(b).or_default() += 1;
        }
    }
    let initial = degree.len();
    let mut live_vertices = initial;
    let mut order = Vec::with_capacity(g.edges.len());
    let mut census = Vec::with_capacity(g.edges.len());
    for (_, es) in comps {
        let mut live: BTreeSet<usize> = es.into_iter().collect();
        while !live.is_empty() {
            let key = |e: usize| {
                let (a, b) = g.edges[e];
                (a.min(b), e)
            };
            let mut candidates: Vec<usize> = live.iter().copied().collect();
            candidates.sort_by_key(|&e| key(e));
            let pick = candidates
                .iter()
                .copied()
                .find(|&e| {
                    let (a, b) = g.edges[e];
                    a == b || connected_without(&g.edges, &live, e, a, b)
                })
                .unwrap_or_else(|| {
                    let leaf = live
                        .iter()
                        .flat_map(|&e| [g.edges[e].0, g.edges[e].1])
                        .filter(|v| degree[v] == 1)
                        .min()
                        .expect("a forest with an edge has a leaf");
                    candidates.into_iter().find(|&e| g.edges[e].0 == leaf || g.edges[e].1 == leaf).expect("leaf edge")
                });
            live.remove(&pick);
            let (a, b) = g.edges[pick];
            for v in if a == b { vec![a] } else { vec![a, b] } {
                let d = degree.get_mut(&v).expect("endpoint");
                *d -= 1;
                if *d == 0 {
                    live_vertices -= 1;
                }
            }
            order.push(pick);
            census.push(order.len() + live_vertices);
        }
    }
    let e = g.edges.len();
    let constant_census = (1..=g.constant_gates).map(|j| e + j).collect();
    EdgeSchedule { order, initial, census, constant_census }
}

#[derive(Default)]
struct RegisterFile {
    free: BTreeSet<usize>,
    count: usize,
}

impl RegisterFile {
    fn alloc(&mut self) -> usize {
        match self.free.pop_first() {
            Some(r) => r,
            None => {
                self.count += 1;
                self.count - 1
            }
        }
    }

    fn release(&mut self, r: usize) {
        self.free.insert(r);
    }
}

/// Converts a layered circuit of width `w` into a register program with at
/// most `w + 1` registers, scheduling each layer transition by
/// [`order_edges`]. Values are written in place whenever the removal of an
/// edge leaves an endpoint without further readers.
pub fn staggerize(c: &LayeredCircuit) -> Result<Slp> {
    use crate::ir::Circuit;
    let c = c.pruned();
    let leaf_of = |id: u32| -> Option<Leaf> {
        match &c.gate(id)?.kind {
            GateKind::Var(i) => Some(Leaf::Var(*i)),
            GateKind::Const(s) => Some(Leaf::Const(s.clone())),
            _ => None,
        }
    };
    if let Some(l) = leaf_of(c.output()) {
        return Slp::new(c.ring(), c.mode(), c.num_vars(), 1, vec![Instr::Load { dst: 0, leaf: l }], 0);
    }
    let out_layer = c.gate(c.output()).expect("output exists").layer;

    let mut regs = RegisterFile::default();
    let mut reg_of: HashMap<u32, usize> = HashMap::new();
    let mut steps = Vec::new();
    for i in 1..out_layer {
        let current: Vec<u32> = c.layer(i).map(|g| g.id).collect();
        let next: Vec<_> = c.layer(i + 1).cloned().collect();
        let in_u = |id: u32| i >= 2 && reg_of.contains_key(&id);
        let mut graph = LayerMultigraph {
            vertices: if i >= 2 { current.clone() } else { Vec::new() },
            edges: Vec::new(),
            constant_gates: 0,
        };
        let mut edge_gate = Vec::new();
        let mut leaf_gates = Vec::new();
        for g in &next {
            let (l, r) = g.kind.operands().expect("internal gate");
            match (in_u(l), in_u(r)) {
                (true, true) => graph.edges.push((l, r)),
                (true, false) => graph.edges.push((l, l)),
                (false, true) => graph.edges.push((r, r)),
                (false, false) => {
                    leaf_gates.push(g);
                    continue;
                }
            }
            edge_gate.push(g);
        }
        graph.constant_gates = leaf_gates.len();

        let mut remaining: HashMap<u32, usize> = HashMap::new();
        for &(a, b) in &graph.edges {
            *remaining.entry(a).or_default() += 1;
            if b != a {
                *remaining.entry(b).or_default() += 1;
            }
        }
        for v in &graph.vertices {
            if !remaining.contains_key(v) {
                regs.release(reg_of[v]);
            }
        }

        let operand = |id: u32, reg_of: &HashMap<u32, usize>| -> Operand {
            match leaf_of(id) {
                Some(l) => Operand::Leaf(l),
                None => Operand::Reg(reg_of[&id]),
            }
        };
        let op_of = |k: &GateKind| if matches!(k, GateKind::Add(..)) { Op::Add } else { Op::Mul };
        let mut next_reg: HashMap<u32, usize> = HashMap::new();
        for e in order_edges(&graph).order {
            let g = edge_gate[e];
            let (a, b) = graph.edges[e];
            let mut isolated = Vec::new();
            for v in if a == b { vec![a] } else { vec![a, b] } {
                let d = remaining.get_mut(&v).expect("endpoint");
                *d -= 1;
                if *d == 0 {
                    isolated.push(reg_of[&v]);
                }
            }
            let dst = match isolated.first() {
                Some(&r) => r,
                None => regs.alloc(),
            };
            let (l, r) = g.kind.operands().expect("internal gate");
            steps.push(Instr::Apply { dst, op: op_of(&g.kind), lhs: operand(l, &reg_of), rhs: operand(r, &reg_of) });
            for &r in isolated.iter().skip(1) {
                regs.release(r);
            }
            next_reg.insert(g.id, dst);
        }
        for g in leaf_gates {
            let dst = regs.alloc();
            let (l, r) = g.kind.operands().expect("internal gate");
            steps.push(Instr::Apply { dst, op: op_of(&g.kind), lhs: operand(l, &reg_of), rhs: operand(r, &reg_of) });
            next_reg.insert(g.id, dst);
        }
        reg_of = next_reg;
    }
    Slp::new(c.ring(), c.mode(), c.num_vars(), regs.count, steps, reg_of[&c.output()])
}
