#![allow(dead_code)]

use std::path::PathBuf;

use bpw::calculus::{check_lines_semantically, check_proof, Mode};
use bpw::constructions::GeneratedProof;
use bpw::semantics::sequent_countermodel;
use bpw::syntax::{parse_axioms, ExtAxiomSet, Formula, PVar};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn fig1() -> ExtAxiomSet {
    let text = std::fs::read_to_string(data_dir().join("fig1.ax")).expect("fig1.ax");
    parse_axioms(&text).expect("fig1 parses").set
}

pub fn lits(n: usize) -> Vec<Formula> {
    (1..=n).map(|i| Formula::var(PVar::idx(i))).collect()
}

/// Checks the proof in its system and, when `lines` is set, every line
/// semantically; otherwise only the conclusion.
pub fn assert_sound(g: &GeneratedProof, lines: bool) {
    if let Err(e) = check_proof(&g.proof, g.system, Mode::Multiset) {
        panic!("{}: line {} fails: {}\n{}", g.proof.provenance, e.id, e.kind, g.proof.lines[e.id].seq);
    }
    if lines {
        for (id, ok) in check_lines_semantically(&g.proof).expect("within cap") {
            assert!(ok, "{}: line {id} invalid: {}", g.proof.provenance, g.proof.lines[id].seq);
        }
    } else {
        let cm = sequent_countermodel(g.conclusion(), &g.proof.axioms).expect("within cap");
        assert!(cm.is_none(), "{}: conclusion falsified by {}", g.proof.provenance, cm.unwrap());
    }
}
