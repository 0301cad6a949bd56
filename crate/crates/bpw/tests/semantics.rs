mod common;

use bpw::constructions::samples::{random_formula, Conn};
use bpw::semantics::*;
use bpw::syntax::{parse_formula, parse_sequent, pvars_of, ExtAxiomSet, ExtVar, Formula, Node, PVar, Sequent, Sort};
use common::fig1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reference evaluator: plain recursion, no memo, no bit tricks.
fn naive(f: Formula, e: &ExtAxiomSet, val: &dyn Fn(PVar) -> bool) -> bool {
    match f.node() {
        Node::Zero => false,
        Node::One => true,
        Node::Var(p) => val(p),
        Node::Dec(a, p, b) => {
            if val(p) {
                naive(b, e, val)
            } else {
                naive(a, e, val)
            }
        }
        Node::Or(a, b) => naive(a, e, val) || naive(b, e, val),
        Node::And(a, b) => naive(a, e, val) && naive(b, e, val),
        Node::Ext(v) => naive(e.def(v).unwrap(), e, val),
    }
}

fn random_axioms(r: &mut ChaCha8Rng, n: usize) -> (ExtAxiomSet, Vec<Formula>) {
    let mut e = ExtAxiomSet::new();
    let mut names = Vec::new();
    for i in 0..5 {
        let conn = [Conn::Dec, Conn::Or, Conn::And][r.gen_range(0..3)];
        let d = random_formula(r, n, &names, 2, conn);
        let v = ExtVar::gen(Sort::E, "semt", vec![], vec![i]);
        e.ensure(v, d).unwrap();
        names.push(Formula::ext(v));
    }
    (e, names)
}

#[test]
fn truth_tables_agree_with_naive_evaluation() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let (e, names) = random_axioms(&mut r, 5);
        let conn = [Conn::Dec, Conn::Or, Conn::And][r.gen_range(0..3)];
        let f = random_formula(&mut r, 5, &names, 3, conn);
        let u = pvars_of(&[f], &e);
        let t = truth_table(f, &e, &u).unwrap();
        for a in 0..t.len() {
            let alpha = Assignment::from_index(&u, a);
            let want = naive(f, &e, &|p| alpha.get(p).unwrap());
            assert_eq!(t.get(a), want, "{f} at {a}");
            assert_eq!(evaluate(&alpha, f, &e).unwrap(), want);
        }
    }
}

#[test]
fn validity_by_brute_force() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let mut valid = 0;
    for _ in 0..300 {
        let (e, names) = random_axioms(&mut r, 3);
        let a = random_formula(&mut r, 3, &names, 2, Conn::Dec);
        let b = random_formula(&mut r, 3, &names, 2, Conn::Or);
        let s = Sequent::of(&[a], &[b]);
        let u = pvars_of(&[a, b], &e);
        let oracle = (0..1u64 << u.len()).all(|i| {
            let val = |p: PVar| i >> u.iter().position(|&q| q == p).unwrap() & 1 == 1;
            !naive(a, &e, &val) || naive(b, &e, &val)
        });
        assert_eq!(sequent_valid(&s, &e).unwrap(), oracle, "{s}");
        match sequent_countermodel(&s, &e).unwrap() {
            None => valid += 1,
            Some(alpha) => {
                assert!(evaluate(&alpha, a, &e).unwrap() && !evaluate(&alpha, b, &e).unwrap());
            }
        }
    }
    assert!(valid > 0 && valid < 300);
}

#[test]
fn empty_sequent_and_constants() {
    let e = ExtAxiomSet::new();
    assert!(!sequent_valid(&parse_sequent("|-").unwrap(), &e).unwrap());
    assert!(sequent_valid(&parse_sequent("0 |-").unwrap(), &e).unwrap());
    assert!(sequent_valid(&parse_sequent("|- 1").unwrap(), &e).unwrap());
    assert!(sequent_valid(&parse_sequent("p1 |- p1").unwrap(), &e).unwrap());
}

#[test]
fn assignments_parse() {
    let a = Assignment::parse("p1=1, p2=0,p10=1").unwrap();
    assert_eq!(a.get(PVar::idx(2)), Some(false));
    assert_eq!(a.get(PVar::idx(10)), Some(true));
    assert!(Assignment::parse("p1=2").is_err());
    assert!(Assignment::parse("q1=1").is_err());
}

#[test]
fn unfolding_fig1_rows() {
    let e = fig1();
    let u = unfold(parse_formula("e31").unwrap_or(Formula::zero()), &e, DEFAULT_UNFOLD_CAP);
    assert!(u.is_err(), "e31 uses ∨");
    let e42 = unfold(parse_formula("e42").unwrap(), &e, 64).unwrap();
    assert_eq!(e42, parse_formula("dec(0,p4,1)").unwrap());
    let mut e2 = ExtAxiomSet::new();
    let mut prev = Formula::var(PVar::idx(1));
    for i in 0..12 {
        let v = ExtVar::gen(Sort::E, "dbl", vec![], vec![i]);
        e2.define(v, Formula::dec(prev, PVar::idx(2), prev)).unwrap();
        prev = Formula::ext(v);
    }
    assert!(matches!(unfold(prev, &e2, 1 << 10), Err(SemError::UnfoldCap(_))));
    assert!(unfold(prev, &e2, 1 << 14).is_ok());
}

#[test]
fn simulation_rules() {
    let e = fig1();
    let f = |s: &str| parse_formula(s).unwrap();
    let mut sim = Simulator::new(&e);
    assert_eq!(sim.rule(f("e42"), f("e42")), Some(SimRule::Refl));
    assert_eq!(sim.rule(f("dec(0,p4,1)"), f("e42")), Some(SimRule::ExtRight));
    assert_eq!(sim.rule(f("e42"), f("dec(0,p4,1)")), Some(SimRule::ExtLeft));
    assert_eq!(sim.rule(f("dec(0,p4,1)"), f("dec(0,p4,1)")), Some(SimRule::Refl));
    assert_eq!(sim.rule(f("or(p1,p2)"), f("p2")), Some(SimRule::OrLeft(true)));
    assert_eq!(sim.rule(f("p1"), f("or(p1,p1)")), Some(SimRule::OrRight));
    assert_eq!(sim.rule(f("dec(p1,p3,p2)"), f("dec(p1,p3,or(p2,p2))")), Some(SimRule::DecDec));
    assert!(!check_simulation(f("e42"), f("e43"), &e).unwrap());
    assert!(!check_simulation(f("and(p1,p2)"), f("p1"), &e).unwrap());
}

#[test]
fn simulation_implies_provable_direction_is_valid() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut hits = 0;
    for _ in 0..400 {
        let (e, names) = random_axioms(&mut r, 3);
        let nd: Vec<Formula> = names.into_iter().filter(|&x| bpw::syntax::classify(x, &e).map(|c| !c.uses_and).unwrap_or(false)).collect();
        if nd.is_empty() {
            continue;
        }
        let a = random_formula(&mut r, 3, &nd, 2, Conn::Or);
        let b = if r.gen_bool(0.5) { a } else { random_formula(&mut r, 3, &nd, 2, Conn::Or) };
        if check_simulation(a, b, &e).unwrap() {
            assert!(sequent_valid(&Sequent::of(&[b], &[a]), &e).unwrap(), "{a} ≲ {b}");
            hits += 1;
        }
    }
    assert!(hits > 50);
}
