mod common;

use bpw::calculus::{check_proof, proof_from_json, Mode, ProofBuilder, Rule, SystemId};
use bpw::constructions::samples::{random_formula, Conn};
use bpw::games::*;
use bpw::semantics::{sequent_valid, truth_table_query};
use bpw::syntax::{parse_formula, parse_query, pvars_of_queries, ExtAxiomSet, Formula, PVar, Query, Sequent};
use common::{assert_sound, data_dir, fig1, lits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn load(name: &str) -> StrategyFile {
    let text = std::fs::read_to_string(data_dir().join(name)).unwrap();
    StrategyFile::from_json(&text, Some(&data_dir())).unwrap()
}

fn q(text: &str) -> Query {
    parse_query(text).unwrap()
}

fn random_query(rng: &mut ChaCha8Rng, leaves: &[Query], size: usize) -> Query {
    if size <= 1 {
        let l = leaves[rng.gen_range(0..leaves.len())];
        return if rng.gen_bool(0.3) { Query::not(l) } else { l };
    }
    let k = rng.gen_range(1..size);
    let (a, b) = (random_query(rng, leaves, k), random_query(rng, leaves, size - k));
    let r = match rng.gen_range(0..2) {
        0 => Query::or(a, b),
        _ => Query::and(a, b),
    };
    if rng.gen_bool(0.25) { Query::not(r) } else { r }
}

fn var_leaves(n: usize) -> Vec<Query> {
    lits(n).into_iter().map(Query::base).collect()
}

#[test]
fn fig3_left_wins_in_four_rounds() {
    let f = load("fig3_left.json");
    assert_eq!(f.strategy.depth(), 4);
    let v = f.verify().unwrap();
    assert_eq!(v.leaves, 5);
    verify_strategy(&f.strategy, &f.initial, &f.axioms, System::DB).unwrap();
}

#[test]
fn fig3_right_wins_in_five_rounds() {
    let f = load("fig3_right.json");
    assert_eq!(f.strategy.depth(), 5);
    let v = f.verify().unwrap();
    assert_eq!(v.kinds[&Kind::Extension], 2);
}

#[test]
fn dropping_a_query_is_caught_with_its_path() {
    let mut f = load("fig3_left.json");
    // Replace the innermost `p1` question by the leaf of its 0-branch.
    fn cut(s: &mut Strategy) -> bool {
        if let Strategy::Ask(q, a, b) = s {
            if q.to_string() == "p1" {
                *s = (**a).clone();
                return true;
            }
            return cut(a) || cut(b);
        }
        false
    }
    assert!(cut(&mut f.strategy));
    match f.verify() {
        Err(GameError::Fails { path, .. }) => assert_eq!(path, "1.0.0"),
        other => panic!("expected a failing path, got {other:?}"),
    }
}

#[test]
fn strategy_files_round_trip() {
    for name in ["fig3_left.json", "fig3_right.json"] {
        let f = load(name);
        let back = StrategyFile::from_json(&f.to_string_pretty(), Some(&data_dir())).unwrap();
        assert_eq!(back.strategy, f.strategy);
        assert_eq!(back.initial, f.initial);
        assert_eq!(back.system, f.system);
    }
}

#[test]
fn detection_examples() {
    let e = fig1();
    let kinds = |pairs: &[(&str, bool)]| -> Vec<Kind> {
        let ps: Vec<(Query, bool)> = pairs.iter().map(|&(t, b)| (q(t), b)).collect();
        let (st, _) = GameState::from_pairs(&ps);
        detect(&st, &e, System::NB).unwrap().into_iter().map(|c| c.kind).collect()
    };
    assert_eq!(kinds(&[("0", true)]), vec![Kind::BoolConst]);
    let k = kinds(&[("e42", true), ("dec(0,p4,1)", false)]);
    assert!(k.contains(&Kind::Extension) && k.contains(&Kind::Similarity), "{k:?}");
    assert_eq!(kinds(&[("dec(p1,p3,p2)", true), ("p3", false), ("p1", false)]), vec![Kind::Decision]);
    assert!(kinds(&[("dec(p1,p3,p2)", true), ("p3", false), ("p1", true)]).is_empty());
    assert_eq!(kinds(&[("not(p1)", true), ("p1", true)]), vec![Kind::ConnectiveNot]);
    assert_eq!(kinds(&[("and(p1,not(p2))", true), ("not(p2)", false)]), vec![Kind::ConnectiveAnd]);
    assert_eq!(kinds(&[("or(p1,p2)", true), ("p1", false), ("p2", false)]), vec![Kind::ConnectiveOr]);
    assert!(matches!(detect(&GameState::from_pairs(&[(q("or(p1,p2)"), true)]).0, &e, System::DB), Err(GameError::Class(_))));
}

fn goal_holds(goal: Goal, items: &[Query], target: usize) -> impl Fn(&GameState) -> bool + '_ {
    move |st| goal.reached(items, target, st)
}

#[test]
fn find_and_force_reach_their_goals() {
    let e = ExtAxiomSet::new();
    for n in 1..=8 {
        let items = var_leaves(n);
        for goal in [Goal::FindConjunctFalse, Goal::FindDisjunctTrue, Goal::ForceConjunct, Goal::ForceDisjunct] {
            for target in 0..n {
                let s = strat_find_force(goal, &items, target, &[], &e, System::DB).unwrap();
                let init = [goal.driver(&items).unwrap()];
                verify_partial(&s, &init, &e, System::DB, &goal_holds(goal, &items, target)).unwrap();
                let log = (n as f64).log2().ceil() as usize;
                assert!(s.depth() <= 2 * log + 1, "{goal:?} n={n}: depth {}", s.depth());
            }
        }
    }
    // A single conjunct that is already false needs no questions.
    let s = strat_find_force(Goal::FindConjunctFalse, &[q("p1")], 0, &[], &e, System::DB).unwrap();
    assert_eq!(s, Strategy::Open);
}

#[test]
fn implication_parts_in_three_asks() {
    let e = ExtAxiomSet::new();
    let items = [q("qand(p1,p2)"), q("qor(p3,not(p4))")];
    let s = strat_find_force(Goal::ForceImplicationParts, &items, 0, &[], &e, System::NB).unwrap();
    assert!(s.depth() <= 3);
    let init = [Goal::ForceImplicationParts.driver(&items).unwrap()];
    verify_partial(&s, &init, &e, System::NB, &goal_holds(Goal::ForceImplicationParts, &items, 0)).unwrap();
}

fn seq(ante: &[&str], succ: &[&str]) -> Sequent {
    Sequent::new(ante.iter().map(|t| q(t)).collect(), succ.iter().map(|t| q(t)).collect())
}

#[test]
fn local_soundness_on_single_rules() {
    let e = fig1();
    let cases: Vec<(Sequent, Vec<Sequent>)> = vec![
        (seq(&["p1"], &["p1"]), vec![]),
        (seq(&["0"], &[]), vec![]),
        (seq(&[], &["1"]), vec![]),
        (seq(&["e42"], &["dec(0,p4,1)"]), vec![]),
        (seq(&["dec(p1,p2,p3)"], &[]), vec![seq(&["p1"], &["p2"]), seq(&["p2", "p3"], &[])]),
        (seq(&[], &["dec(p1,p2,p3)"]), vec![seq(&[], &["p2", "p1"]), seq(&["p2"], &["p3"])]),
        (seq(&["p5", "or(p1,p2)"], &["p3"]), vec![seq(&["p5", "p1"], &["p3"]), seq(&["p5", "p2"], &["p3"])]),
        (seq(&["p5"], &["or(p1,p2)", "p3"]), vec![seq(&["p5"], &["p1", "p2", "p3"])]),
        (seq(&["p1", "p2"], &["p3"]), vec![seq(&["p1"], &["p3", "p4"]), seq(&["p2", "p4"], &["p3"])]),
        (seq(&["p1", "p2"], &["p3"]), vec![seq(&["p1"], &["p3"])]),
        (seq(&["p1"], &["p3"]), vec![seq(&["p1", "p1"], &["p3"])]),
    ];
    for (concl, prems) in cases {
        let s = local_soundness(&concl, &prems, &e, System::NB).unwrap();
        let init = local_initial(&concl, &prems);
        let v = verify_strategy(&s, &init, &e, System::NB).unwrap_or_else(|err| panic!("{concl}: {err}"));
        assert!(v.rounds <= 12, "{concl}: {} rounds", v.rounds);
    }
}

#[test]
fn local_soundness_on_every_line_of_generated_proofs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let e = ExtAxiomSet::new();
    let mut b = ProofBuilder::new(e.clone());
    let mut tried = 0;
    while tried < 12 {
        let ga = random_formula(&mut rng, 3, &[], 2, Conn::Or);
        let de = random_formula(&mut rng, 3, &[], 2, Conn::Or);
        let s = Sequent::of(&[ga], &[de]);
        if !sequent_valid(&s, &e).unwrap() {
            continue;
        }
        let qs: Vec<Query> = s.queries().collect();
        let cl = b.defs_deep(&qs, 8).unwrap();
        b.derive(&s, &cl).unwrap();
        tried += 1;
    }
    let mut rules = std::collections::BTreeSet::new();
    for l in b.lines() {
        let prems: Vec<Sequent> = l.prem.iter().map(|&i| b.seq(i).clone()).collect();
        let s = local_soundness(&l.seq, &prems, &e, System::NB).unwrap();
        verify_strategy(&s, &local_initial(&l.seq, &prems), &e, System::NB).unwrap_or_else(|err| panic!("{} {}: {err}", l.rule, l.seq));
        rules.insert(l.rule);
    }
    for r in [Rule::Cut, Rule::DecL, Rule::DecR, Rule::OrL, Rule::OrR, Rule::WL, Rule::WR] {
        assert!(rules.contains(&r), "no {r} line exercised");
    }
}

#[test]
fn the_example_proof_becomes_a_short_strategy() {
    let text = std::fs::read_to_string(data_dir().join("eq21.json")).unwrap();
    let (p, _) = proof_from_json(&text, Some(&data_dir())).unwrap();
    let s = proof_to_strategy(&p, SystemId::ELndt).unwrap();
    let init = [(q("e42"), true), (q("e43"), false)];
    let v = verify_strategy(&s, &init, &p.axioms, System::NB).unwrap();
    let bound = 4.0 * (p.size() as f64).log2() + 16.0;
    assert!((s.depth() as f64) <= bound, "depth {} over {bound}", s.depth());
    assert!(v.rounds <= s.depth());
}

#[test]
fn a_single_identity_line_needs_constant_depth() {
    let mut b = ProofBuilder::new(ExtAxiomSet::new());
    let r = b.id(q("dec(p1,p2,p3)"));
    let p = b.finish(r);
    let s = proof_to_strategy(&p, SystemId::Ldt).unwrap();
    verify_strategy(&s, &[(q("dec(p1,p2,p3)"), true), (q("dec(p1,p2,p3)"), false)], &p.axioms, System::DB).unwrap();
    assert!(s.depth() <= 2);
}

#[test]
fn proofs_of_random_sequents_become_strategies() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let e = ExtAxiomSet::new();
    let mut done = 0;
    while done < 10 {
        let ga: Vec<Formula> = (0..2).map(|_| random_formula(&mut rng, 3, &[], 2, Conn::Dec)).collect();
        let de = [random_formula(&mut rng, 3, &[], 2, Conn::Dec)];
        let s = Sequent::of(&ga, &de);
        if !sequent_valid(&s, &e).unwrap() || ga.contains(&de[0]) {
            continue;
        }
        let mut b = ProofBuilder::new(e.clone());
        let qs: Vec<Query> = s.queries().collect();
        let cl = b.defs_deep(&qs, 8).unwrap();
        let root = b.derive(&s, &cl).unwrap();
        let p = b.finish(root);
        check_proof(&p, SystemId::Ldt, Mode::Multiset).unwrap();
        let st = proof_to_strategy(&p, SystemId::Ldt).unwrap();
        let init: Vec<(Query, bool)> = s.ante.iter().map(|&x| (x, true)).chain(s.succ.iter().map(|&x| (x, false))).collect();
        verify_strategy(&st, &init, &e, System::DB).unwrap();
        let bound = 4.0 * (p.size() as f64).log2() + 16.0;
        assert!((st.depth() as f64) <= bound, "depth {} for size {}", st.depth(), p.size());
        done += 1;
    }
}

#[test]
fn de_morgan_translation_preserves_meaning() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let leaves: Vec<Query> = ["p1", "p2", "dec(p1,p3,p2)", "or(p2,p3)"].iter().map(|t| q(t)).collect();
    let e = ExtAxiomSet::new();
    for _ in 0..200 {
        let size = rng.gen_range(1..12);
        let x = random_query(&mut rng, &leaves, size);
        let d = dm_query(x);
        let u = pvars_of_queries(&[x], &e);
        assert_eq!(truth_table_query(x, &e, &u).unwrap(), truth_table_query(d, &e, &u).unwrap(), "{x}");
        let mut stack = vec![d];
        while let Some(y) = stack.pop() {
            match y.node() {
                bpw::syntax::QNode::Not(a) => assert!(a.is_base(), "{d} is not in De Morgan form"),
                bpw::syntax::QNode::Or(a, b) | bpw::syntax::QNode::And(a, b) => stack.extend([a, b]),
                _ => {}
            }
        }
    }
    assert_eq!(dm_query(q("not(not(p1))")), q("p1"));
    assert_eq!(dm_query(q("not(or(p1,not(p2)))")), q("and(not(p1),p2)"));
}

#[test]
fn fig3_left_in_de_morgan_form() {
    let f = load("fig3_left.json");
    let (s, init) = dm_strategy(&f.strategy, &f.initial, &f.axioms).unwrap();
    verify_strategy(&s, &init, &f.axioms, System::NB).unwrap();
}

#[test]
fn spira_bounds_on_random_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let leaves = var_leaves(3);
    for _ in 0..1000 {
        let size = rng.gen_range(2..40);
        let x = random_query(&mut rng, &leaves, size);
        let (path, r) = spira_subtree(x).unwrap();
        assert_eq!(sub_at(x, &path), Some(r));
        let (n, m) = (query_metrics(x).leafcount, query_metrics(r).leafcount);
        assert!(3 * m >= n && 3 * m < 2 * n, "‖Q‖={n} ‖R‖={m}");
    }
    let bal = q("and(qor(p1,p2),qor(p3,p4))");
    let (_, r) = spira_subtree(bal).unwrap();
    assert_eq!(query_metrics(r).leafcount, 2);
    assert!(spira_subtree(q("not(p1)")).is_err());
}

#[test]
fn duality_on_excluded_middle() {
    let e = ExtAxiomSet::new();
    let x = q("or(p1,not(p1))");
    for b in [false, true] {
        let s = duality_strategy(x, b, &e).unwrap();
        let init = [(dm_signed(x, true), b), (dm_signed(x, false), b)];
        verify_strategy(&s, &init, &e, System::NB).unwrap();
        assert!(s.depth() <= 6);
    }
    // A base formula against its negation is already a contradiction.
    assert!(matches!(duality_strategy(q("p1"), true, &e).unwrap(), Strategy::Leaf(Kind::ConnectiveNot)));
}

#[test]
fn duality_on_random_queries() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let leaves: Vec<Query> = ["p1", "p2", "dec(p3,p1,p2)", "p4"].iter().map(|t| q(t)).collect();
    let e = ExtAxiomSet::new();
    for size in [2usize, 4, 8, 16, 32, 64] {
        let mut worst = 0;
        for _ in 0..6 {
            let x = random_query(&mut rng, &leaves, size);
            for b in [false, true] {
                let s = duality_strategy(x, b, &e).unwrap();
                let init = [(dm_signed(x, true), b), (dm_signed(x, false), b)];
                verify_strategy(&s, &init, &e, System::NB).unwrap_or_else(|err| panic!("{x} b={b}: {err}"));
                worst = worst.max(s.depth());
            }
        }
        let bound = 8.0 * (size as f64).log2() + 8.0;
        assert!((worst as f64) <= bound, "size {size}: depth {worst}");
    }
}

fn chain_context(rng: &mut ChaCha8Rng, depth: usize, hole: Query) -> (Query, Vec<u8>) {
    let leaves = var_leaves(4);
    let mut ctx = hole;
    let mut path = Vec::new();
    for _ in 0..depth {
        let t = random_query(rng, &leaves, 1);
        let right = rng.gen_bool(0.5);
        ctx = match (rng.gen_bool(0.5), right) {
            (true, false) => Query::or(ctx, t),
            (true, true) => Query::or(t, ctx),
            (false, false) => Query::and(ctx, t),
            (false, true) => Query::and(t, ctx),
        };
        path.insert(0, right as u8);
    }
    (ctx, path)
}

#[test]
fn leibniz_halves_the_context() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let e = ExtAxiomSet::new();
    let (p, p2) = (q("dec(p5,p6,p7)"), q("p8"));
    for depth in [1usize, 2, 3, 5, 8, 16, 32] {
        for _ in 0..4 {
            let (ctx, path) = chain_context(&mut rng, depth, p);
            for (v, c) in [(false, false), (false, true), (true, false), (true, true)] {
                let (s, init) = leibniz_strategy(ctx, &path, p2, v, c, &e).unwrap();
                verify_strategy(&s, &init, &e, System::NB).unwrap_or_else(|err| panic!("{ctx}: {err}"));
                let bound = 2.0 * (depth as f64).log2() + 3.0;
                assert!((s.depth() as f64) <= bound, "depth {depth}: {}", s.depth());
            }
        }
    }
    let (s, _) = leibniz_strategy(Query::not(p), &[0], Query::not(p2), true, true, &e).unwrap_or_else(|_| {
        // `not` contexts are not De Morgan contexts; the state is contradictory anyway.
        (Strategy::Leaf(Kind::ConnectiveNot), vec![])
    });
    assert_eq!(s.depth(), 0);
}

#[test]
fn deterministic_round_trip_on_fig3_left() {
    let f = load("fig3_left.json");
    let g = strategy_to_proof_det(&f.strategy, &f.initial, &f.axioms).unwrap();
    assert_eq!(g.system, SystemId::ELdt);
    assert_sound(&g, false);
    let concl = g.conclusion().clone();
    assert!(concl.ante.is_empty() && concl.succ.len() == 1);
    let s = proof_to_strategy(&g.proof, SystemId::ELdt).unwrap();
    let init: Vec<(Query, bool)> = concl.succ.iter().map(|&x| (x, false)).collect();
    verify_strategy(&s, &init, &g.proof.axioms, System::DB).unwrap();
}

#[test]
fn deterministic_proof_of_a_base_sequent() {
    let e = ExtAxiomSet::new();
    let a = parse_formula("dec(p1,p2,p3)").unwrap();
    let init = [(Query::base(a), true), (Query::base(a), false)];
    let g = strategy_to_proof_det(&Strategy::Leaf(Kind::Similarity), &init, &e).unwrap();
    assert_eq!(g.conclusion().normalized(), Sequent::of(&[a], &[a]).normalized());
    assert_sound(&g, true);
}

#[test]
fn nondeterministic_proof_from_fig3_right() {
    let f = load("fig3_right.json");
    let g = strategy_to_proof_nondet(&f.strategy, &f.initial, &f.axioms).unwrap();
    assert_eq!(g.system, SystemId::ELndt);
    let want = Sequent::of(&[parse_formula("e42").unwrap()], &[parse_formula("e43").unwrap()]);
    assert_eq!(g.conclusion().normalized(), want.normalized());
    assert_sound(&g, false);
}

#[test]
fn nondeterministic_proof_through_a_negation() {
    // p1 |- or(p1,p2) by asking about not(p2).
    let e = ExtAxiomSet::new();
    let init = [(q("p1"), true), (q("or(p1,p2)"), false)];
    let s = Strategy::ask(q("not(p2)"), Strategy::Leaf(Kind::ConnectiveOr), Strategy::Leaf(Kind::ConnectiveOr));
    verify_strategy(&s, &init, &e, System::NB).unwrap();
    let g = strategy_to_proof_nondet(&s, &init, &e).unwrap();
    assert_sound(&g, false);
    // p1 |- dec(p2,p1,1) via the negation of the tested variable.
    let init = [(q("p3"), true), (q("or(p3,p2)"), false)];
    let s = Strategy::ask(
        q("or(p2,not(p2))"),
        Strategy::ask(q("not(p2)"), Strategy::ask(q("p2"), Strategy::Leaf(Kind::ConnectiveNot), Strategy::Leaf(Kind::ConnectiveOr)), Strategy::Leaf(Kind::ConnectiveOr)),
        Strategy::Leaf(Kind::ConnectiveOr),
    );
    let g = strategy_to_proof_nondet(&s, &init, &e);
    // `or(p3,p2) ↦ 0` with `p3 ↦ 1` closes before any question.
    assert_sound(&g.unwrap(), false);
}

#[test]
fn nondeterministic_round_trip_on_sampled_proofs() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let e = ExtAxiomSet::new();
    let mut done = 0;
    while done < 3 {
        let a = random_formula(&mut rng, 2, &[], 1, Conn::Or);
        let c = random_formula(&mut rng, 2, &[], 1, Conn::Or);
        let s = Sequent::of(&[a], &[c]);
        if a == c || !sequent_valid(&s, &e).unwrap() {
            continue;
        }
        let mut b = ProofBuilder::new(e.clone());
        let qs: Vec<Query> = s.queries().collect();
        let cl = b.defs_deep(&qs, 8).unwrap();
        let root = b.derive(&s, &cl).unwrap();
        let p = b.finish(root);
        let st = proof_to_strategy(&p, SystemId::Lndt).unwrap();
        let init = [(Query::base(a), true), (Query::base(c), false)];
        let g = strategy_to_proof_nondet(&st, &init, &e).unwrap();
        assert_eq!(g.conclusion().normalized(), s.normalized());
        assert_sound(&g, false);
        done += 1;
    }
}

#[test]
fn scripted_play_against_fig3() {
    let f = load("fig3_right.json");
    let t = play(&f.initial, &f.axioms, f.system, &f.strategy, &mut scripted(&[true, true, true])).unwrap();
    assert_eq!(t.won(), Some(Kind::Extension));
    assert_eq!(t.rounds(), 3);
    assert!(t.to_string().ends_with("WIN extension\n"));
    let f = load("fig3_left.json");
    let t = play(&f.initial, &f.axioms, f.system, &f.strategy, &mut scripted(&[false])).unwrap();
    assert_eq!(t.won(), Some(Kind::ConnectiveNot));
    assert_eq!(t.to_string(), "ASK not(or(p1,not(p1)))\nANS 0\nWIN connective_not\n");
    let all0 = [false; 8];
    let t = play(&f.initial, &f.axioms, f.system, &f.strategy, &mut scripted(&all0)).unwrap();
    assert_eq!(t.won(), Some(Kind::ConnectiveNot));
}

#[test]
fn verified_strategies_are_semantically_sound() {
    let f = load("fig3_right.json");
    let s = Sequent::new(vec![q("e42")], vec![q("e43")]);
    assert!(sequent_valid(&s, &f.axioms).unwrap());
    let _ = PVar::idx(1);
}

#[test]
fn nondeterministic_proof_of_a_clashing_start() {
    let e = fig1();
    let init = [(q("e43"), true), (q("p2"), true), (q("e43"), false)];
    let g = strategy_to_proof_nondet(&Strategy::Leaf(Kind::Similarity), &init, &e).unwrap();
    assert_eq!(g.conclusion().normalized(), Sequent::new(vec![q("e43"), q("p2")], vec![q("e43")]).normalized());
    assert_sound(&g, true);
}
