//! Line-based text formats for layered circuits and ABPs. `#` starts a
//! comment; blank lines are ignored.

use std::collections::HashMap;
use std::fmt::Write;

use super::{Abp, AbpEdge, Circuit, Gate, GateKind, LayeredCircuit, LinearForm, Mode};
use crate::coeffring::Ring;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    Circuit(LayeredCircuit),
    Abp(Abp),
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn semantic(line: usize, message: impl Into<String>) -> Error {
    Error::Semantic { line, message: message.into() }
}

/// Non-empty lines with comments stripped, tagged with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((k + 1, toks))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| syntax(line, format!("expected {what}, found `{tok}`")))
}

struct Header {
    name: String,
    ring: Ring,
    mode: Mode,
    num_vars: u32,
}

fn parse_ring(line: usize, toks: &[&str]) -> Result<Ring> {
    match toks {
        ["ring", "rational"] => Ok(Ring::Rational),
        ["ring", "prime", p] => {
            let p: u64 = num(line, p, "a prime modulus")?;
            Ring::prime(p).map_err(|e| semantic(line, e.to_string()))
        }
        _ => Err(syntax(line, "expected `ring prime <p>` or `ring rational`")),
    }
}

fn parse_mode(line: usize, toks: &[&str]) -> Result<Mode> {
    match toks {
        ["mode", "commutative"] => Ok(Mode::Commutative),
        ["mode", "noncommutative"] => Ok(Mode::Noncommutative),
        _ => Err(syntax(line, "expected `mode commutative` or `mode noncommutative`")),
    }
}

fn parse_vars(line: usize, toks: &[&str]) -> Result<u32> {
    match toks {
        ["vars", n] => num(line, n, "a variable count"),
        _ => Err(syntax(line, "expected `vars <n>`")),
    }
}

fn header_name(line: usize, toks: &[&str], keyword: &str) -> Result<String> {
    match toks {
        [k, rest @ ..] if *k == keyword && !rest.is_empty() => Ok(rest.join(" ")),
        _ => Err(syntax(line, format!("expected `{keyword} <name>`"))),
    }
}

/// Parses either format, dispatching on the first keyword.
pub fn parse(text: &str) -> Result<Artifact> {
    match lines(text).next() {
        Some((_, toks)) if toks[0] == "abp" => parse_abp(text).map(Artifact::Abp),
        _ => parse_circuit(text).map(Artifact::Circuit),
    }
}

pub fn parse_circuit(text: &str) -> Result<LayeredCircuit> {
    let mut it = lines(text);
    let eof = |what: &str| syntax(text.lines().count().max(1), format!("unexpected end of input, expected {what}"));
    let (l, t) = it.next().ok_or_else(|| eof("`circuit <name>`"))?;
    let name = header_name(l, &t, "circuit")?;
    let (l, t) = it.next().ok_or_else(|| eof("`ring`"))?;
    let ring = parse_ring(l, &t)?;
    let (l, t) = it.next().ok_or_else(|| eof("`mode`"))?;
    let mode = parse_mode(l, &t)?;
    let (l, t) = it.next().ok_or_else(|| eof("`vars`"))?;
    let num_vars = parse_vars(l, &t)?;
    let h = Header { name, ring, mode, num_vars };

    let mut gates: Vec<(usize, Gate)> = Vec::new();
    let mut seen: HashMap<u32, usize> = HashMap::new();
    let mut output: Option<(usize, u32)> = None;
    for (l, t) in it {
        if output.is_some() {
            return Err(syntax(l, "content after `output`"));
        }
        match t.as_slice() {
            ["gate", id, layer, kind, rest @ ..] => {
                let id: u32 = num(l, id, "a gate id")?;
                let layer: u32 = num(l, layer, "a layer number")?;
                let kind = match (*kind, rest) {
                    ("var", [i]) => {
                        let i: u32 = num(l, i, "a variable index")?;
                        if i == 0 || i > h.num_vars {
                            return Err(semantic(l, format!("variable x{i} outside 1..={}", h.num_vars)));
                        }
                        GateKind::Var(i)
                    }
                    ("const", [c]) => GateKind::Const(h.ring.parse_scalar(c).map_err(|m| syntax(l, m))?),
                    ("add", [a, b]) => GateKind::Add(num(l, a, "a gate id")?, num(l, b, "a gate id")?),
                    ("mul", [a, b]) => GateKind::Mul(num(l, a, "a gate id")?, num(l, b, "a gate id")?),
                    _ => return Err(syntax(l, "malformed gate line")),
                };
                if kind.is_leaf() != (layer == 1) {
                    return Err(semantic(l, "leaves belong to layer 1 and internal gates to layers >= 2"));
                }
                if seen.insert(id, l).is_some() {
                    return Err(semantic(l, format!("duplicate gate id {id}")));
                }
                gates.push((l, Gate { id, layer, kind }));
            }
            ["output", id] => output = Some((l, num(l, id, "a gate id")?)),
            _ => return Err(syntax(l, format!("unknown directive `{}`", t[0]))),
        }
    }
    for (l, g) in &gates {
        if let Some((a, b)) = g.kind.operands() {
            for o in [a, b] {
                if !seen.contains_key(&o) {
                    return Err(semantic(*l, format!("gate {} references undefined gate {o}", g.id)));
                }
            }
        }
    }
    let (ol, out) = output.ok_or_else(|| eof("`output <id>`"))?;
    if !seen.contains_key(&out) {
        return Err(semantic(ol, format!("output names undefined gate {out}")));
    }
    LayeredCircuit::new(h.name, h.ring, h.mode, h.num_vars, gates.into_iter().map(|(_, g)| g).collect(), out)
}

fn ring_line(ring: Ring) -> String {
    match ring {
        Ring::Prime(p) => format!("ring prime {p}"),
        Ring::Rational => "ring rational".into(),
    }
}

pub fn serialize_circuit(c: &LayeredCircuit) -> String {
    let mut s = String::new();
    writeln!(s, "circuit {}", c.name()).unwrap();
    writeln!(s, "{}", ring_line(c.ring())).unwrap();
    writeln!(s, "mode {}", c.mode()).unwrap();
    writeln!(s, "vars {}", c.num_vars()).unwrap();
    for g in c.gates() {
        match &g.kind {
            GateKind::Var(i) => writeln!(s, "gate {} 1 var {i}", g.id),
            GateKind::Const(v) => writeln!(s, "gate {} 1 const {v}", g.id),
            GateKind::Add(a, b) => writeln!(s, "gate {} {} add {a} {b}", g.id, g.layer),
            GateKind::Mul(a, b) => writeln!(s, "gate {} {} mul {a} {b}", g.id, g.layer),
        }
        .unwrap();
    }
    writeln!(s, "output {}", c.output()).unwrap();
    s
}

pub fn parse_abp(text: &str) -> Result<Abp> {
    let mut it = lines(text).peekable();
    let eof = |what: &str| syntax(text.lines().count().max(1), format!("unexpected end of input, expected {what}"));
    let (l, t) = it.next().ok_or_else(|| eof("`abp <name>`"))?;
    let name = header_name(l, &t, "abp")?;
    let (l, t) = it.next().ok_or_else(|| eof("`ring`"))?;
    let ring = parse_ring(l, &t)?;
    let mut mode = Mode::Noncommutative;
    if let Some((l, t)) = it.peek() {
        if t[0] == "mode" {
            mode = parse_mode(*l, t)?;
            it.next();
        }
    }
    let (l, t) = it.next().ok_or_else(|| eof("`vars`"))?;
    let num_vars = parse_vars(l, &t)?;

    let mut vertices = Vec::new();
    let mut seen: HashMap<u32, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut source = None;
    let mut sink = None;
    for (l, t) in it {
        match t.as_slice() {
            ["vertex", id, layer] => {
                let id: u32 = num(l, id, "a vertex id")?;
                if seen.insert(id, l).is_some() {
                    return Err(semantic(l, format!("duplicate vertex {id}")));
                }
                vertices.push((id, num(l, layer, "a layer")?));
            }
            ["edge", from, to, c0, terms @ ..] => {
                let constant = ring.parse_scalar(c0).map_err(|m| syntax(l, m))?;
                let mut ts = Vec::new();
                for term in terms {
                    let (i, c) = term.split_once(':').ok_or_else(|| syntax(l, format!("expected <i>:<c>, found `{term}`")))?;
                    let i: u32 = num(l, i, "a variable index")?;
                    if i == 0 || i > num_vars {
                        return Err(semantic(l, format!("variable x{i} outside 1..={num_vars}")));
                    }
                    ts.push((i, ring.parse_scalar(c).map_err(|m| syntax(l, m))?));
                }
                edges.push((l, AbpEdge { from: num(l, from, "a vertex id")?, to: num(l, to, "a vertex id")?, label: LinearForm { constant, terms: ts } }));
            }
            ["source", id] => source = Some((l, num::<u32>(l, id, "a vertex id")?)),
            ["sink", id] => sink = Some((l, num::<u32>(l, id, "a vertex id")?)),
            _ => return Err(syntax(l, format!("unknown directive `{}`", t[0]))),
        }
    }
    for (l, e) in &edges {
        for v in [e.from, e.to] {
            if !seen.contains_key(&v) {
                return Err(semantic(*l, format!("edge references undefined vertex {v}")));
            }
        }
    }
    let (sl, source) = source.ok_or_else(|| eof("`source <id>`"))?;
    let (kl, sink) = sink.ok_or_else(|| eof("`sink <id>`"))?;
    for (l, v) in [(sl, source), (kl, sink)] {
        if !seen.contains_key(&v) {
            return Err(semantic(l, format!("undefined vertex {v}")));
        }
    }
    Abp::new(name, ring, mode, num_vars, vertices, edges.into_iter().map(|(_, e)| e).collect(), source, sink)
}

pub fn serialize_abp(a: &Abp) -> String {
    let mut s = String::new();
    writeln!(s, "abp {}", a.name()).unwrap();
    writeln!(s, "{}", ring_line(a.ring())).unwrap();
    writeln!(s, "mode {}", a.mode()).unwrap();
    writeln!(s, "vars {}", a.num_vars()).unwrap();
    for (v, l) in a.vertices() {
        writeln!(s, "vertex {v} {l}").unwrap();
    }
    for e in a.edges() {
        write!(s, "edge {} {} {}", e.from, e.to, e.label.constant).unwrap();
        for (i, c) in &e.label.terms {
            write!(s, " {i}:{c}").unwrap();
        }
        s.push('\n');
    }
    writeln!(s, "source {}", a.source()).unwrap();
    writeln!(s, "sink {}", a.sink()).unwrap();
    s
}

pub fn serialize(a: &Artifact) -> String {
    match a {
        Artifact::Circuit(c) => serialize_circuit(c),
        Artifact::Abp(a) => serialize_abp(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "circuit demo
ring prime 2305843009213693951
mode commutative
vars 4
gate 1 1 var 1
gate 2 1 var 2
gate 3 1 var 3
gate 4 1 var 4
gate 7 2 mul 1 2
gate 8 2 mul 3 4
gate 9 3 add 7 8
output 9
";

    #[test]
    fn sample_parses_and_roundtrips() {
        let c = parse_circuit(SAMPLE).unwrap();
        assert_eq!(c.width(), 2);
        let ring = c.ring();
        let pt: Vec<_> = (1..=4).map(|v| ring.from_u64(v)).collect();
        assert_eq!(c.evaluate(&pt).unwrap(), ring.from_u64(14));
        assert_eq!(serialize_circuit(&c), SAMPLE);
        assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn comments_and_order() {
        let text = "# header\ncircuit t # trailing\nring rational\nmode commutative\nvars 1\n\ngate 3 2 add 1 2\ngate 1 1 var 1\ngate 2 1 const -1/2\noutput 3\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.size(), 3);
        assert!(serialize_circuit(&c).contains("const -1/2"));
    }

    #[test]
    fn undefined_reference_is_semantic() {
        let bad = SAMPLE.replace("gate 9 3 add 7 8", "gate 5 3 add 2 9").replace("output 9", "output 5");
        assert!(matches!(parse_circuit(&bad), Err(Error::Semantic { line: 11, .. })));
        let dup = SAMPLE.replace("gate 8 2 mul 3 4", "gate 7 2 mul 3 4");
        assert!(matches!(parse_circuit(&dup), Err(Error::Semantic { .. })));
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let bad = SAMPLE.replace("gate 2 1 var 2", "gate 2 1 varr 2");
        assert!(matches!(parse_circuit(&bad), Err(Error::Syntax { line: 6, .. })));
        assert!(matches!(parse_circuit("circuit x\nring integers\n"), Err(Error::Syntax { line: 2, .. })));
    }

    #[test]
    fn abp_roundtrip() {
        let text = "abp d\nring rational\nmode noncommutative\nvars 2\nvertex 1 0\nvertex 2 1\nvertex 3 2\nedge 1 2 0/1 1:1/1\nedge 2 3 1/1 2:3/1\nsource 1\nsink 3\n";
        let a = parse_abp(text).unwrap();
        assert_eq!(serialize_abp(&a), text);
        assert!(matches!(parse(text).unwrap(), Artifact::Abp(_)));
    }
}
