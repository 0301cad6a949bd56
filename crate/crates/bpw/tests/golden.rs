mod common;

use bpw::calculus::{check_lines_semantically, check_proof, proof_from_json, Mode, SystemId};
use bpw::semantics::{evaluate, sequent_valid, truth_table, Assignment};
use bpw::syntax::{classify, parse_formula, parse_sequent, PVar, Shape};
use common::{data_dir, fig1};

#[test]
fn fig1_is_two_of_four() {
    let e = fig1();
    assert_eq!(e.len(), 10);
    let e11 = parse_formula("e11").unwrap();
    let u: Vec<PVar> = (1..=4).map(PVar::idx).collect();
    let t = truth_table(e11, &e, &u).unwrap();
    for a in 0..16u64 {
        assert_eq!(t.get(a), a.count_ones() >= 2, "assignment {a:04b}");
    }
    assert_eq!(t.count_true(), 11);
    assert_eq!(classify(e11, &e).unwrap().shape(), Shape::Endt);
    let alpha = Assignment::parse("p1=1,p2=1,p3=0,p4=0").unwrap();
    assert!(evaluate(&alpha, e11, &e).unwrap());
    let alpha = Assignment::parse("p1=1,p2=0,p3=0,p4=0").unwrap();
    assert!(!evaluate(&alpha, e11, &e).unwrap());
}

#[test]
fn eq21_checks() {
    let text = std::fs::read_to_string(data_dir().join("eq21.json")).unwrap();
    let (p, sys) = proof_from_json(&text, Some(&data_dir())).unwrap();
    assert_eq!(sys, Some(SystemId::ELndt));
    check_proof(&p, SystemId::ELndt, Mode::Multiset).unwrap();
    assert!(check_lines_semantically(&p).unwrap().iter().all(|&(_, ok)| ok));
    assert_eq!(p.conclusion().unwrap(), &parse_sequent("e42 |- e43").unwrap());
    let e = fig1();
    assert!(!sequent_valid(&parse_sequent("e43 |- e42").unwrap(), &e).unwrap());
}
