use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use slpforge::coeffring::{Ring, Scalar, DEFAULT_PRIME};
use slpforge::families::{
    apply_projection, build_e_abp, build_e_width2, build_p, build_palindrome, build_permanent_sparse, p_formula, project_to_formula,
    BenOrParams, FamilyParams, PBuild, PForm, Projection,
};
use slpforge::ir::text::{self, Artifact};
use slpforge::ir::{Caps, Circuit, FormulaArena, LayeredCircuit, Mode, Slp};
use slpforge::monotone::{coverage, mon_set, mon_var_graph};
use slpforge::pit::{nw_pit, schwartz_zippel_with, verify_permanent, Backend, HardFamily, NwPitOptions, PermVerdict, SzOptions, Verdict, DEFAULT_GRID_BUDGET};
use slpforge::transforms::{
    depth_to_width, homogeneous_component, homogeneous_prefix, partial_derivative_y, root_circuit, sparse_to_width2, staggerize, RootProblem,
};

#[derive(Parser)]
#[command(name = "slpforge", version, about = "Bounded-width arithmetic circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    #[value(name = "P")]
    P,
    Palindrome,
    #[value(name = "E-abp")]
    EAbp,
    #[value(name = "E-width2")]
    EWidth2,
    Perm,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Formula,
    Circuit,
}

#[derive(Clone, Copy, ValueEnum)]
enum PitMode {
    Sz,
    Nw,
}

#[derive(clap::Args)]
struct Io {
    /// Input file (circuit or ABP text format).
    #[arg(short, long = "input", alias = "circuit")]
    input: PathBuf,
    /// Output file; printed to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TesterArgs {
    #[arg(long, value_enum, default_value = "sz")]
    mode: PitMode,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Degree bound for the randomized test (default: syntactic degree).
    #[arg(long)]
    degree: Option<u64>,
    #[arg(long)]
    sample_size: Option<u64>,
    /// Design set size for the deterministic tester.
    #[arg(long, default_value_t = 2)]
    m: u32,
    #[arg(long, default_value = "desk-rule")]
    family: String,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the explicit families.
    Family {
        #[arg(long, value_enum)]
        name: FamilyName,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value = "circuit")]
        form: FormArg,
        /// `rational`, `prime` (the default large prime) or `prime:<p>`.
        #[arg(long, default_value = "rational")]
        ring: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a layered circuit into an equivalent staggered one.
    Stagger {
        #[command(flatten)]
        io: Io,
    },
    /// Re-layer a formula-shaped circuit with width equal to its depth.
    #[command(name = "depth2width")]
    DepthToWidth {
        #[command(flatten)]
        io: Io,
    },
    /// Homogeneous component `H_index`, or the prefix `H_{<=prefix}`.
    Homog {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        degree: u32,
        #[arg(long, conflicts_with = "prefix", required_unless_present = "prefix")]
        index: Option<u32>,
        #[arg(long)]
        prefix: Option<u32>,
    },
    /// `j`-th derivative in the last variable, whose degree is at most `r`.
    Deriv {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        r: u32,
    },
    /// Expand and rebuild as a two-register program.
    CompileSparse {
        #[command(flatten)]
        io: Io,
    },
    /// Power-series root in the last variable, truncated at degree `m`.
    Root {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        y0: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: u32,
    },
    /// Print the expansion.
    Expand {
        #[arg(short, long = "input", alias = "circuit")]
        input: PathBuf,
    },
    /// Evaluate at a point given as comma-separated scalars.
    Eval {
        #[arg(short, long = "input", alias = "circuit")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Monomial support, its variable graph, and coverage of `P^l_k`.
    Mon {
        #[arg(short, long = "input", alias = "circuit")]
        input: PathBuf,
        #[arg(long, value_enum)]
        family: Option<FamilyName>,
        #[arg(long, requires = "family")]
        l: Option<u32>,
        #[arg(long, requires = "family")]
        k: Option<u32>,
    },
    /// Projection of `P^l_k` onto a formula-shaped target circuit.
    Project {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        k: u32,
        /// Where to write the projected `P^l_k` circuit.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Identity test.
    Pit {
        #[arg(short, long = "circuit", alias = "input")]
        circuit: PathBuf,
        #[command(flatten)]
        tester: TesterArgs,
    },
    /// Check that a circuit on `n^2` variables computes the permanent.
    VerifyPerm {
        #[arg(short, long = "circuit", alias = "input")]
        circuit: PathBuf,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        tester: TesterArgs,
    },
}

struct Config {
    caps: Caps,
    grid_budget: u64,
}

fn config() -> Result<Config> {
    let mut c = Config { caps: Caps::default(), grid_budget: DEFAULT_GRID_BUDGET };
    let Ok(spec) = std::env::var("SLPFORGE_CAPS") else { return Ok(c) };
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| anyhow!("SLPFORGE_CAPS: expected key=value, got `{part}`"))?;
        let bad = || anyhow!("SLPFORGE_CAPS: bad value for {key}: `{value}`");
        match key.trim() {
            "max_degree" => c.caps.max_degree = value.trim().parse().map_err(|_| bad())?,
            "max_terms" => c.caps.max_terms = value.trim().parse().map_err(|_| bad())?,
            "grid_budget" => c.grid_budget = value.trim().parse().map_err(|_| bad())?,
            other => bail!("SLPFORGE_CAPS: unknown key `{other}`"),
        }
    }
    Ok(c)
}

fn parse_ring(s: &str) -> Result<Ring> {
    Ok(match s {
        "rational" => Ring::Rational,
        "prime" => Ring::Prime(DEFAULT_PRIME),
        other => {
            let p = other.strip_prefix("prime:").unwrap_or(other);
            Ring::prime(p.parse().with_context(|| format!("bad ring `{s}`"))?)?
        }
    })
}

fn read(path: &Path) -> Result<Artifact> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_circuit(path: &Path) -> Result<LayeredCircuit> {
    match read(path)? {
        Artifact::Circuit(c) => Ok(c),
        Artifact::Abp(_) => bail!("{} is an ABP; this command needs a layered circuit", path.display()),
    }
}

fn emit(artifact: &Artifact, output: Option<&Path>) -> Result<()> {
    let text = text::serialize(artifact);
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_circuit(c: &LayeredCircuit, output: Option<&Path>) -> Result<()> {
    emit(&Artifact::Circuit(c.clone()), output)
}

fn terms<C: Circuit>(c: &C, caps: Caps) -> String {
    match c.expand(caps) {
        Ok(p) => p.len().to_string(),
        Err(_) => "capped".into(),
    }
}

fn program_report(p: &Slp, name: &str, caps: Caps, output: Option<&Path>) -> Result<String> {
    let c = p.to_staggered_circuit(name);
    emit_circuit(&c, output)?;
    Ok(format!("registers={} size={} width={} terms={}", p.registers(), c.size(), c.width(), terms(p, caps)))
}

fn family_params(l: Option<u32>, k: Option<u32>) -> Result<FamilyParams> {
    let (Some(l), Some(k)) = (l, k) else { bail!("family P needs --l and --k") };
    Ok(FamilyParams::new(l, k)?)
}

fn need_n(n: Option<u32>) -> Result<u32> {
    n.ok_or_else(|| anyhow!("this family needs --n"))
}

fn fmt_point(p: &[Scalar]) -> String {
    p.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

fn tester_backend(t: &TesterArgs, grid_budget: u64) -> Result<Backend> {
    Ok(match t.mode {
        PitMode::Sz => Backend::SchwartzZippel { trials: t.trials },
        PitMode::Nw => Backend::Nw {
            family: HardFamily::by_name(&t.family).ok_or_else(|| anyhow!("unknown hard family `{}`", t.family))?,
            options: NwPitOptions { m: t.m, sample_size: t.sample_size, grid_budget },
        },
    })
}

fn run(cmd: Command) -> Result<String> {
    let cfg = config()?;
    let caps = cfg.caps;
    Ok(match cmd {
        Command::Family { name, l, k, n, form, ring, output } => {
            let ring = parse_ring(&ring)?;
            let out = output.as_deref();
            match name {
                FamilyName::P => {
                    let params = family_params(l, k)?;
                    let c = match build_p(params, PForm::Circuit, ring)? {
                        PBuild::Circuit(c) => c,
                        PBuild::Formula(_) => unreachable!(),
                    };
                    let c = match form {
                        FormArg::Circuit => c,
                        FormArg::Formula => p_formula(params).to_layered(ring, Mode::Commutative, params.num_vars(), c.name())?,
                    };
                    emit_circuit(&c, out)?;
                    format!("width={} size={} terms={}", c.width(), c.size(), terms(&c, caps))
                }
                FamilyName::Palindrome => {
                    let c = build_palindrome(need_n(n)?, ring)?;
                    emit_circuit(&c, out)?;
                    format!("width={} size={} terms={}", c.width(), c.size(), terms(&c, caps))
                }
                FamilyName::EAbp => {
                    let a = build_e_abp(need_n(n)?, ring)?;
                    let line = format!("vertices={} edges={} terms={}", a.vertices().len(), a.edges().len(), terms(&a, caps));
                    emit(&Artifact::Abp(a), out)?;
                    line
                }
                FamilyName::EWidth2 => {
                    let n = need_n(n)?;
                    let params = BenOrParams::new(n, ring)?;
                    let p = build_e_width2(&params, ring)?;
                    let m = &params.multiplicity;
                    format!("{} multiplicity={m}", program_report(&p, &format!("E_width2_{n}"), caps, out)?)
                }
                FamilyName::Perm => {
                    let n = need_n(n)?;
                    let p = sparse_to_width2(&build_permanent_sparse(n, ring, caps)?);
                    program_report(&p, &format!("perm_{n}"), caps, out)?
                }
            }
        }
        Command::Stagger { io } => {
            let c = read_circuit(&io.input)?;
            let p = staggerize(&c)?;
            format!("{} input_width={}", program_report(&p, c.name(), caps, io.output.as_deref())?, c.width())
        }
        Command::DepthToWidth { io } => {
            let c = read_circuit(&io.input)?;
            let f = FormulaArena::from_circuit(&c).to_tree()?.flattened();
            let out = depth_to_width(&f, c.ring(), c.mode(), c.num_vars(), c.name())?;
            emit_circuit(&out, io.output.as_deref())?;
            format!("depth={} width={} size={} terms={}", f.depth(), out.width(), out.size(), terms(&out, caps))
        }
        Command::Homog { io, degree, index, prefix } => {
            let c = read_circuit(&io.input)?;
            let p = Slp::program_of(&c)?;
            let (h, name) = match (index, prefix) {
                (Some(i), _) => (homogeneous_component(&p, degree, i)?, format!("{}_H{i}", c.name())),
                (None, Some(k)) => (homogeneous_prefix(&p, degree, k)?, format!("{}_Hle{k}", c.name())),
                (None, None) => bail!("give --index or --prefix"),
            };
            format!("{} input_registers={}", program_report(&h, &name, caps, io.output.as_deref())?, p.registers())
        }
        Command::Deriv { io, j, r } => {
            let c = read_circuit(&io.input)?;
            let p = Slp::program_of(&c)?;
            let d = partial_derivative_y(&p, j, r)?;
            format!("{} input_registers={}", program_report(&d, &format!("{}_d{j}", c.name()), caps, io.output.as_deref())?, p.registers())
        }
        Command::CompileSparse { io } => {
            let c = read_circuit(&io.input)?;
            let p = sparse_to_width2(&c.expand(caps)?);
            program_report(&p, c.name(), caps, io.output.as_deref())?
        }
        Command::Root { io, y0, m, r } => {
            let c = read_circuit(&io.input)?;
            let y0 = c.ring().parse_scalar(&y0).map_err(|e| anyhow!("bad --y0: {e}"))?;
            let p = Slp::program_of(&c)?;
            let rp = RootProblem::with_caps(p.clone(), r, m, y0, caps)?;
            let root = root_circuit(&rp)?;
            let name = format!("{}_root", c.name());
            format!(
                "{} input_registers={} index_set={}",
                program_report(&root, &name, caps, io.output.as_deref())?,
                p.registers(),
                rp.index_set().len()
            )
        }
        Command::Expand { input } => {
            let poly = match read(&input)? {
                Artifact::Circuit(c) => c.expand(caps)?,
                Artifact::Abp(a) => a.expand(caps)?,
            };
            println!("{poly}");
            format!("terms={} degree={}", poly.len(), poly.degree())
        }
        Command::Eval { input, point } => {
            let art = read(&input)?;
            let ring = match &art {
                Artifact::Circuit(c) => c.ring(),
                Artifact::Abp(a) => a.ring(),
            };
            let pt = point
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| ring.parse_scalar(s).map_err(|e| anyhow!("bad point coordinate `{s}`: {e}")))
                .collect::<Result<Vec<_>>>()?;
            let v = match &art {
                Artifact::Circuit(c) => c.evaluate(&pt)?,
                Artifact::Abp(a) => a.evaluate(&pt)?,
            };
            format!("value={v}")
        }
        Command::Mon { input, family, l, k } => {
            let c = read_circuit(&input)?;
            let s = mon_set(&c, caps)?;
            let g = mon_var_graph(&s);
            for comp in &g.components {
                println!("component {} variables={} monomials={}", comp.label, comp.variables.len(), comp.monomials.len());
            }
            let mut line = format!("monomials={} variables={} components={}", s.len(), g.variables.len(), g.components.len());
            if family.is_some() {
                let r = coverage(&c, family_params(l, k)?, caps)?;
                line += &format!(" contained={} family_monomials={} fraction={}", r.contained, r.family_monomials, r.fraction);
            }
            line
        }
        Command::Project { target, l, k, output } => {
            let t = read_circuit(&target)?;
            let params = FamilyParams::new(l, k)?;
            let f = FormulaArena::from_circuit(&t).to_tree()?;
            let map = project_to_formula(&f, params)?;
            for (i, p) in map.iter().enumerate() {
                let image = match p {
                    Projection::Var(v) => format!("x{v}"),
                    Projection::Zero => "0".into(),
                    Projection::One => "1".into(),
                };
                println!("x{} -> {image}", i + 1);
            }
            let projected = apply_projection(&p_formula(params), &map, t.ring());
            let pc = depth_to_width(&projected, t.ring(), t.mode(), t.num_vars(), &format!("{}_proj", t.name()))?;
            if let Some(o) = output.as_deref() {
                emit_circuit(&pc, Some(o))?;
            }
            let matches = pc.expand(caps)? == t.expand(caps)?;
            let used = map.iter().filter(|p| matches!(p, Projection::Var(_))).count();
            format!("vars={} mapped={used} matches={matches}", map.len())
        }
        Command::Pit { circuit, tester } => {
            let verdict = match read(&circuit)? {
                Artifact::Circuit(c) => pit_one(&c, &tester, cfg.grid_budget)?,
                Artifact::Abp(a) => pit_one(&a, &tester, cfg.grid_budget)?,
            };
            match verdict {
                Verdict::Zero => "verdict=zero".into(),
                Verdict::NonZero(w) => format!("verdict=nonzero witness={}", fmt_point(&w)),
            }
        }
        Command::VerifyPerm { circuit, n, tester } => {
            let c = read_circuit(&circuit)?;
            match verify_permanent(&c, n, &tester_backend(&tester, cfg.grid_budget)?, tester.seed)? {
                PermVerdict::Accept => "verdict=accept".into(),
                PermVerdict::Reject { k, witness } => format!("verdict=reject k={k} witness={}", fmt_point(&witness)),
            }
        }
    })
}

fn pit_one<C: Circuit + Sync>(c: &C, t: &TesterArgs, grid_budget: u64) -> Result<Verdict> {
    Ok(match tester_backend(t, grid_budget)? {
        Backend::SchwartzZippel { trials } => {
            schwartz_zippel_with(c, SzOptions { trials, degree_bound: t.degree, sample_size: t.sample_size, seed: t.seed })?
        }
        Backend::Nw { family, options } => nw_pit(c, &family, options)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(line) => {
            println!("RESULT {line}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
