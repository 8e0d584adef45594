use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const P21: &str = "\
circuit target
ring rational
mode commutative
vars 3
gate 1 1 var 1
gate 2 1 var 2
gate 3 1 var 3
gate 4 2 mul 1 2
gate 5 3 add 4 3
output 5
";

// x1 + (-1)*x1
const ZERO: &str = "\
circuit zero
ring prime 2305843009213693951
mode commutative
vars 1
gate 1 1 var 1
gate 2 1 const 2305843009213693950
gate 3 2 mul 1 2
gate 4 3 add 3 1
output 4
";

// y^2 - 1 - x1, with y = x2
const SQRT: &str = "\
circuit sqrt
ring prime 2305843009213693951
mode commutative
vars 2
gate 1 1 var 1
gate 2 1 var 2
gate 3 1 const 2305843009213693950
gate 4 2 mul 2 2
gate 5 2 mul 1 3
gate 6 3 add 4 5
gate 7 4 add 6 3
output 7
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slpforge")).args(args).output().expect("binary runs")
}

fn result_line(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8(o.stdout.clone()).unwrap();
    let last = out.lines().last().unwrap_or_default().to_string();
    assert!(last.starts_with("RESULT "), "last line was {last:?}");
    last
}

fn field(line: &str, key: &str) -> String {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
        .to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn reparses(p: &Path) {
    let text = fs::read_to_string(p).unwrap();
    slpforge::ir::text::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
}

#[test]
fn family_p_example() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("p.txt");
    let line = result_line(&run(&["family", "--name", "P", "--l", "2", "--k", "2", "-o", s(&out)]));
    assert_eq!(field(&line, "width"), "4");
    assert_eq!(field(&line, "terms"), "8");
    reparses(&out);
    let formula = dir.path().join("pf.txt");
    let f = result_line(&run(&["family", "--name", "P", "--l", "2", "--k", "2", "--form", "formula", "-o", s(&formula)]));
    assert_eq!(field(&f, "terms"), "8");
    reparses(&formula);
}

#[test]
fn every_family_writes_parsable_text() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["--name", "palindrome", "--n", "3"][..],
        &["--name", "E-abp", "--n", "2"],
        &["--name", "E-width2", "--n", "2", "--ring", "prime"],
        &["--name", "perm", "--n", "3"],
    ] {
        let out = dir.path().join("f.txt");
        let mut full = vec!["family"];
        full.extend_from_slice(args);
        full.extend(["-o", s(&out)]);
        result_line(&run(&full));
        reparses(&out);
    }
}

#[test]
fn stagger_and_depth_to_width() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("p.txt");
    result_line(&run(&["family", "--name", "P", "--l", "2", "--k", "2", "-o", s(&p)]));
    let st = dir.path().join("st.txt");
    let line = result_line(&run(&["stagger", "-i", s(&p), "-o", s(&st)]));
    let regs: usize = field(&line, "registers").parse().unwrap();
    assert!(regs <= 5, "{line}");
    assert_eq!(field(&line, "terms"), "8");
    reparses(&st);
    let dw = dir.path().join("dw.txt");
    let line = result_line(&run(&["depth2width", "--circuit", s(&p), "-o", s(&dw)]));
    assert_eq!(field(&line, "terms"), "8");
    reparses(&dw);
}

#[test]
fn algebraic_transforms_write_circuits() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sqrt.txt", SQRT);
    for (name, args) in [
        ("h.txt", vec!["homog", "--degree", "2", "--index", "2"]),
        ("hp.txt", vec!["homog", "--degree", "2", "--prefix", "1"]),
        ("d.txt", vec!["deriv", "--j", "1", "--r", "2"]),
        ("c.txt", vec!["compile-sparse"]),
        ("r.txt", vec!["root", "--y0", "1", "--m", "3", "--r", "2"]),
    ] {
        let out = dir.path().join(name);
        let mut full = args.clone();
        full.extend(["-i", s(&input), "-o", s(&out)]);
        result_line(&run(&full));
        reparses(&out);
    }
    // sqrt(1 + x1) = 1 + x1/2 - x1^2/8 + x1^3/16 + ...
    let r = dir.path().join("r.txt");
    let line = result_line(&run(&["expand", "-i", s(&r)]));
    assert_eq!(field(&line, "terms"), "4");
}

#[test]
fn evaluation_and_monomials() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.txt", P21);
    assert_eq!(field(&result_line(&run(&["eval", "-i", s(&t), "--point", "2,3,4"])), "value"), "10/1");
    let p = dir.path().join("p.txt");
    result_line(&run(&["family", "--name", "P", "--l", "2", "--k", "2", "-o", s(&p)]));
    let line = result_line(&run(&["mon", "-i", s(&p), "--family", "P", "--l", "2", "--k", "2"]));
    assert_eq!(field(&line, "contained"), "true");
    assert_eq!(field(&line, "fraction"), "1");
}

#[test]
fn projection_command() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.txt", P21);
    let out = dir.path().join("proj.txt");
    result_line(&run(&["project", "--target", s(&t), "--l", "2", "--k", "2", "-o", s(&out)]));
    reparses(&out);
    let a = result_line(&run(&["expand", "-i", s(&out)]));
    let b = result_line(&run(&["expand", "-i", s(&t)]));
    assert_eq!(field(&a, "terms"), field(&b, "terms"));
}

#[test]
fn identity_tests() {
    let dir = TempDir::new().unwrap();
    let z = write(&dir, "z.txt", ZERO);
    assert_eq!(field(&result_line(&run(&["pit", "--circuit", s(&z)])), "verdict"), "zero");
    assert_eq!(field(&result_line(&run(&["pit", "--circuit", s(&z), "--mode", "nw"])), "verdict"), "zero");
    let nz = write(&dir, "nz.txt", SQRT);
    assert_eq!(field(&result_line(&run(&["pit", "--circuit", s(&nz), "--seed", "3"])), "verdict"), "nonzero");
    let perm = dir.path().join("perm.txt");
    result_line(&run(&["family", "--name", "perm", "--n", "3", "--ring", "prime", "-o", s(&perm)]));
    assert_eq!(field(&result_line(&run(&["verify-perm", "--circuit", s(&perm), "--n", "3"])), "verdict"), "accept");
}

#[test]
fn results_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let nz = write(&dir, "nz.txt", SQRT);
    let a = result_line(&run(&["pit", "--circuit", s(&nz), "--seed", "11"]));
    let b = result_line(&run(&["pit", "--circuit", s(&nz), "--seed", "11"]));
    assert_eq!(a, b);
    let x = run(&["family", "--name", "E-width2", "--n", "2", "--ring", "prime"]);
    let y = run(&["family", "--name", "E-width2", "--n", "2", "--ring", "prime"]);
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn exit_codes() {
    let bad = run(&["family", "--name", "P", "--l", "2", "--k", "0"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "-i", "/nonexistent/file"]).status.code(), Some(1));
}

#[test]
fn caps_from_environment() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("p.txt");
    result_line(&run(&["family", "--name", "P", "--l", "2", "--k", "2", "-o", s(&p)]));
    let o = Command::new(env!("CARGO_BIN_EXE_slpforge"))
        .args(["expand", "-i", s(&p)])
        .env("SLPFORGE_CAPS", "max_terms=3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
