mod common;

use bpw::calculus::*;
use bpw::constructions::ThresholdStore;
use bpw::syntax::{parse_sequent, sequent_size, ExtAxiomSet};
use common::{data_dir, lits};

fn load(text: &str) -> Proof {
    proof_from_json(text, None).unwrap().0
}

fn eq21() -> Proof {
    let text = std::fs::read_to_string(data_dir().join("eq21.json")).unwrap();
    proof_from_json(&text, Some(&data_dir())).unwrap().0
}

const WEAKEN: &str = r#"[
  {"system": "ldt", "axioms": ""},
  {"id": 0, "seq": "p1 |- p1", "rule": "id", "prem": []},
  {"id": 1, "seq": "p2, p1 |- p1", "rule": "w-l", "prem": [0]}
]"#;

#[test]
fn strict_mode_fixes_positions() {
    let p = load(WEAKEN);
    check_proof(&p, SystemId::Ldt, Mode::Multiset).unwrap();
    let err = check_proof(&p, SystemId::Ldt, Mode::Strict).unwrap_err();
    assert_eq!(err.id, 1);
    let p = load(&WEAKEN.replace("p2, p1 |- p1", "p1, p2 |- p1"));
    check_proof(&p, SystemId::Ldt, Mode::Strict).unwrap();
}

#[test]
fn structural_errors() {
    let dangling = WEAKEN.replace(r#""prem": [0]"#, r#""prem": [7]"#);
    // Either the loader or the checker refuses a premise that is not a line.
    if let Ok((p, _)) = proof_from_json(&dangling, None) {
        let kind = check_proof(&p, SystemId::Ldt, Mode::Multiset).unwrap_err().kind;
        assert!(matches!(kind, LineErrorKind::Dangling(7) | LineErrorKind::NonDag(7)), "{kind:?}");
    }
    let arity = WEAKEN.replace(r#""rule": "w-l", "prem": [0]"#, r#""rule": "w-l", "prem": [0, 0]"#);
    let p = load(&arity);
    assert!(matches!(check_proof(&p, SystemId::Ldt, Mode::Multiset).unwrap_err().kind, LineErrorKind::Arity { .. }));
    assert!(matches!(check_proof(&Proof::default(), SystemId::Ldt, Mode::Multiset).unwrap_err().kind, LineErrorKind::EmptyProof));
}

#[test]
fn systems_restrict_rules_and_classes() {
    let p = eq21();
    check_proof(&p, SystemId::ELndt, Mode::Multiset).unwrap();
    // No extension rule in the plain systems; no ∨ in the deterministic ones.
    assert!(check_proof(&p, SystemId::Lndt, Mode::Multiset).is_err());
    assert!(check_proof(&p, SystemId::ELdt, Mode::Multiset).is_err());
    let neg = WEAKEN.replace(r#""seq": "p2, p1 |- p1", "rule": "w-l""#, r#""seq": "|- p1, not(p1)", "rule": "not-r""#);
    let p = load(&neg);
    assert!(check_proof(&p, SystemId::Ldt, Mode::Multiset).is_err());
    check_proof(&p, SystemId::LkELdt, Mode::Multiset).unwrap();
}

#[test]
fn every_mutated_line_is_caught() {
    let p = eq21();
    let other = parse_sequent("p1 |- p2").unwrap();
    for i in 0..p.len() {
        let mut q = p.clone();
        q.lines[i].seq = other.clone();
        let errs = check_proof_all(&q, SystemId::ELndt, Mode::Multiset);
        assert!(errs.iter().any(|e| e.id == i), "line {i} mutation not reported: {errs:?}");
    }
}

#[test]
fn every_line_of_eq21_is_valid() {
    let p = eq21();
    let v = check_lines_semantically(&p).unwrap();
    assert_eq!(v.len(), p.len());
    assert!(v.iter().all(|&(_, ok)| ok));
}

#[test]
fn json_round_trip_keeps_lines() {
    let mut st = ThresholdStore::new(lits(3), ExtAxiomSet::new());
    let g = st.lemma("truth_4", 1, 1).unwrap();
    let v = proof_to_json(&g.proof, g.system);
    let (back, sys) = proof_from_json(&serde_json::to_string(&v).unwrap(), None).unwrap();
    assert_eq!(sys, Some(g.system));
    assert_eq!(back.lines.len(), g.proof.lines.len());
    for (a, b) in back.lines.iter().zip(&g.proof.lines) {
        assert_eq!((a.rule, &a.prem), (b.rule, &b.prem));
        // Generated variables get file names, so compare shapes.
        assert_eq!(sequent_size(&a.seq), sequent_size(&b.seq));
    }
    check_proof(&back, g.system, Mode::Multiset).unwrap();
    let (again, _) = proof_from_json(&serde_json::to_string(&proof_to_json(&back, g.system)).unwrap(), None).unwrap();
    assert_eq!(serde_json::to_string(&proof_to_json(&again, g.system)).unwrap(), serde_json::to_string(&proof_to_json(&back, g.system)).unwrap());
}

#[test]
fn bad_files_are_rejected() {
    assert!(proof_from_json("{}", None).is_err());
    let (empty, _) = proof_from_json("[]", None).unwrap();
    assert!(matches!(check_proof(&empty, SystemId::Ldt, Mode::Multiset).unwrap_err().kind, LineErrorKind::EmptyProof));
    assert!(proof_from_json(&WEAKEN.replace("w-l", "w-x"), None).is_err());
    assert!(proof_from_json(&WEAKEN.replace("p2, p1 |- p1", "p2, |- p1"), None).is_err());
}

#[test]
fn system_names() {
    for s in SystemId::ALL {
        assert_eq!(s.name().parse::<SystemId>().unwrap(), s);
    }
    assert!("lk".parse::<SystemId>().is_err());
}
