mod common;

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::{random_layered, random_slp, random_sparse, rng, zero_by_construction};
use slpforge::families::{apply_projection, build_p, p_formula, project_to_formula, FamilyParams, PBuild, PForm, Projection};
use slpforge::ir::text::{parse_circuit, serialize_circuit};
use slpforge::ir::{Abp, AbpEdge, Caps, Circuit, Expansion, Formula, LinearForm, Mode, Slp};
use slpforge::monotone::{coverage, formula_mon_set, mon_set, mon_var_graph};
use slpforge::pit::{nw_pit, schwartz_zippel, HardFamily, NwPitOptions, Verdict};
use slpforge::transforms::{homogeneous_component, partial_derivative_y, sparse_to_width2, staggerize};
use slpforge::{Ring, Scalar};

fn caps() -> Caps {
    Caps::default()
}

fn mode_of(bit: bool) -> Mode {
    if bit {
        Mode::Noncommutative
    } else {
        Mode::Commutative
    }
}

fn point(r: &mut ChaCha8Rng, ring: Ring, n: u32) -> Vec<Scalar> {
    (0..n).map(|_| ring.from_i64(r.gen_range(-50..=50))).collect()
}

/// Alternating formula of height at most `h` and fan-in at most `l` over
/// `n` variables; constants are 0 or 1 when `bool_consts`, else 1..=3.
fn random_formula(r: &mut ChaCha8Rng, ring: Ring, n: u32, l: usize, h: u32, sum: bool, bool_consts: bool) -> Formula {
    if h == 0 || r.gen_bool(0.2) {
        return if r.gen_bool(0.85) {
            Formula::Var(r.gen_range(1..=n))
        } else if bool_consts {
            Formula::Const(ring.from_u64(r.gen_range(0..=1)))
        } else {
            Formula::Const(ring.from_u64(r.gen_range(1..=3)))
        };
    }
    let kids = (0..r.gen_range(1..=l)).map(|_| random_formula(r, ring, n, l, h - 1, !sum, bool_consts)).collect();
    if sum {
        Formula::Sum(kids)
    } else {
        Formula::Product(kids)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_agrees_with_expansion(seed in any::<u64>(), nc in any::<bool>()) {
        let mut r = rng(seed);
        let ring = Ring::default_prime();
        let c = random_layered(&mut r, ring, mode_of(nc), 3, 4, 40, 5);
        if !nc {
            let e = c.expand(caps()).unwrap();
            let x = point(&mut r, ring, 3);
            prop_assert_eq!(c.evaluate(&x).unwrap(), e.evaluate(&x).unwrap());
        } else {
            prop_assert!(c.expand(caps()).unwrap().degree() <= 5);
        }
    }

    #[test]
    fn text_roundtrip(seed in any::<u64>(), nc in any::<bool>(), prime in any::<bool>()) {
        let mut r = rng(seed);
        let ring = if prime { Ring::default_prime() } else { Ring::Rational };
        let c = random_layered(&mut r, ring, mode_of(nc), 3, 4, 30, 5);
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serialize_circuit(&back), serialize_circuit(&c));
    }

    #[test]
    fn program_staggered_roundtrip(seed in any::<u64>(), nc in any::<bool>()) {
        let mut r = rng(seed);
        let ring = Ring::default_prime();
        let w = r.gen_range(1..=4);
        let steps = r.gen_range(1..=15);
        let p = random_slp(&mut r, ring, mode_of(nc), 3, w, steps, 6);
        let st = p.to_staggered_circuit("p");
        prop_assert!(st.is_staggered());
        prop_assert!(st.width() <= w + 1);
        let back = Slp::from_staggered(&st).unwrap();
        let e = p.expand(caps()).unwrap();
        prop_assert_eq!(st.expand(caps()).unwrap(), e.clone());
        prop_assert_eq!(back.expand(caps()).unwrap(), e);
    }

    #[test]
    fn abp_value_is_path_sum(seed in any::<u64>(), nc in any::<bool>()) {
        let mut r = rng(seed);
        let ring = Ring::Rational;
        let mode = mode_of(nc);
        let layers = r.gen_range(1..=4u32);
        let mut vertices = vec![(0, 0)];
        let mut prev = vec![0u32];
        let mut edges = Vec::new();
        let mut next_id = 1;
        for l in 1..=layers {
            let count = if l == layers { 1 } else { r.gen_range(1..=3) };
            let cur: Vec<u32> = (0..count).map(|i| next_id + i).collect();
            next_id += count;
            for &v in &cur {
                vertices.push((v, l));
            }
            // every vertex gets an in-edge and an out-edge
            for (i, &v) in cur.iter().enumerate() {
                edges.push(AbpEdge { from: prev[i % prev.len()], to: v, label: LinearForm::var(ring, r.gen_range(1..=2)) });
            }
            for (i, &u) in prev.iter().enumerate() {
                edges.push(AbpEdge { from: u, to: cur[i % cur.len()], label: LinearForm { constant: ring.from_u64(r.gen_range(0..=2)), terms: vec![(r.gen_range(1..=2), ring.one())] } });
            }
            prev = cur;
        }
        let sink = next_id - 1;
        let abp = Abp::new("r", ring, mode, 2, vertices, edges, 0, sink).unwrap();
        let brute = abp.path_sum(&Expansion::new(ring, mode, 2, caps())).unwrap();
        prop_assert_eq!(abp.expand(caps()).unwrap(), brute);
    }

    #[test]
    fn projection_realises_target(seed in 0u64..50) {
        let mut r = rng(seed);
        let ring = Ring::Rational;
        let (l, k) = if seed % 2 == 0 { (2, 2) } else { (3, 2) };
        let params = FamilyParams::new(l, k).unwrap();
        let target = random_formula(&mut r, ring, 4, l as usize, 2 * k, true, true);
        let map = project_to_formula(&target, params).unwrap();
        prop_assert_eq!(map.len(), params.num_vars() as usize);
        let got = apply_projection(&p_formula(params), &map, ring).expand(ring, Mode::Commutative, 4, caps()).unwrap();
        prop_assert_eq!(got, target.expand(ring, Mode::Commutative, 4, caps()).unwrap());
    }

    #[test]
    fn monomial_set_is_support_when_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = Ring::Rational;
        let top = r.gen_bool(0.5);
        let f = random_formula(&mut r, ring, 4, 3, 4, top, false);
        let c = f.to_layered(ring, Mode::Commutative, 4, "f").unwrap();
        prop_assert!(c.is_monotone());
        let s = mon_set(&c, caps()).unwrap();
        prop_assert_eq!(&s.members, &c.expand(caps()).unwrap().support());
        prop_assert_eq!(s, formula_mon_set(&f, Mode::Commutative, 4, caps()).unwrap());
    }

    #[test]
    fn components_partition_the_graph(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = Ring::Rational;
        let f = random_formula(&mut r, ring, 6, 3, 4, true, false);
        let s = formula_mon_set(&f, Mode::Commutative, 6, caps()).unwrap();
        let g = mon_var_graph(&s);
        let mons: usize = g.components.iter().map(|c| c.monomials.len()).sum();
        prop_assert_eq!(mons, g.monomials.len());
        let mut vars: Vec<u32> = g.components.iter().flat_map(|c| c.variables.clone()).collect();
        vars.sort_unstable();
        prop_assert_eq!(&vars, &g.variables);
        // removing one component's variables leaves exactly the other components
        if let Some(comp) = g.components.iter().find(|c| !c.variables.is_empty()) {
            let killed: Vec<Projection> = (1..=6).map(|v| if comp.variables.contains(&v) { Projection::Zero } else { Projection::Var(v) }).collect();
            let rest = apply_projection(&f, &killed, ring);
            let left = formula_mon_set(&rest, Mode::Commutative, 6, caps()).unwrap();
            prop_assert_eq!(left.len(), s.len() - comp.monomials.len());
            prop_assert!(left.is_subset(&s));
        }
    }

    #[test]
    fn coverage_shrinks_under_restriction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = Ring::Rational;
        let params = FamilyParams::new(2, 2).unwrap();
        let PBuild::Circuit(full) = build_p(params, PForm::Circuit, ring).unwrap() else { unreachable!() };
        let base = coverage(&full, params, caps()).unwrap();
        prop_assert!(base.contained);
        let map: Vec<Projection> = (1..=params.num_vars()).map(|v| if r.gen_bool(0.3) { Projection::Zero } else { Projection::Var(v) }).collect();
        let restricted = apply_projection(&p_formula(params), &map, ring).to_layered(ring, Mode::Commutative, params.num_vars(), "r").unwrap();
        let cov = coverage(&restricted, params, caps()).unwrap();
        prop_assert!(cov.contained);
        prop_assert!(cov.common <= base.common);
        prop_assert!(cov.fraction <= base.fraction);
    }

    #[test]
    fn width2_keeps_word_order(seed in any::<u64>(), nc in any::<bool>()) {
        let mut r = rng(seed);
        let ring = Ring::default_prime();
        let terms = r.gen_range(0..=6);
        let p = random_sparse(&mut r, ring, mode_of(nc), 3, terms, 5);
        let s = sparse_to_width2(&p);
        prop_assert!(s.registers() <= 2);
        prop_assert_eq!(s.expand(caps()).unwrap(), p);
    }

    #[test]
    fn transforms_keep_ring_and_mode(seed in any::<u64>(), nc in any::<bool>()) {
        let mut r = rng(seed);
        let ring = if seed % 2 == 0 { Ring::default_prime() } else { Ring::Rational };
        let c = random_layered(&mut r, ring, mode_of(nc), 2, 3, 20, 4);
        let p = staggerize(&c).unwrap();
        prop_assert_eq!((p.ring(), p.mode()), (ring, mode_of(nc)));
        if !nc {
            let h = homogeneous_component(&p, 4, 2).unwrap();
            prop_assert_eq!((h.ring(), h.mode()), (ring, Mode::Commutative));
            let d = partial_derivative_y(&p, 1, 4).unwrap();
            prop_assert_eq!((d.ring(), d.mode()), (ring, Mode::Commutative));
        }
    }

    #[test]
    fn testers_answer_zero_on_zero_and_give_real_witnesses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = Ring::default_prime();
        let n = r.gen_range(1..=3);
        let steps = r.gen_range(1..=5);
        let p = random_slp(&mut r, ring, Mode::Commutative, n, 2, steps, 2);
        let z = zero_by_construction(&p);
        let nonzero = !p.expand(caps()).unwrap().is_zero();
        for family in [HardFamily::desk_rule(), HardFamily::index_sum()] {
            prop_assert_eq!(nw_pit(&z, &family, NwPitOptions::new(2)).unwrap(), Verdict::Zero);
            if let Verdict::NonZero(w) = nw_pit(&p, &family, NwPitOptions::new(2)).unwrap() {
                prop_assert!(!p.evaluate(&w).unwrap().is_zero());
            }
        }
        prop_assert_eq!(schwartz_zippel(&z, 5, 2, seed).unwrap(), Verdict::Zero);
        match schwartz_zippel(&p, 40, 2, seed).unwrap() {
            Verdict::NonZero(w) => prop_assert!(!p.evaluate(&w).unwrap().is_zero()),
            Verdict::Zero => prop_assert!(!nonzero, "nonzero program missed by all trials"),
        }
    }
}
