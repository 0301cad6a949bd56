mod common;

use bpw::constructions::{DeciderStore, ThresholdStore};
use bpw::syntax::{ExtAxiomSet, Formula};
use common::{assert_sound, lits};

#[test]
fn threshold_families_at_four_literals() {
    let mut st = ThresholdStore::new(lits(4), ExtAxiomSet::new());
    let n = 4i64;
    for j in 0..=4usize {
        for k in -1..=n + 1 {
            let g = st.lemma("mono_step", j, k).unwrap();
            assert_sound(&g, true);
            if k <= 0 {
                assert_sound(&st.lemma("mono_zero", j, k).unwrap(), true);
            }
            if k > n - j as i64 {
                assert_sound(&st.lemma("mono_big", j, k).unwrap(), true);
            }
            if j < 4 {
                for item in 1..=4 {
                    assert_sound(&st.lemma(&format!("truth_{item}"), j, k).unwrap(), true);
                }
            }
        }
    }
}

#[test]
fn threshold_counting_semantics() {
    let mut st = ThresholdStore::new(lits(4), ExtAxiomSet::new());
    let r = st.semantics_check(-1..=5).unwrap();
    assert!(r.is_clean(), "{:?}", r.mismatches);
    assert_eq!(r.checked, 5 * 7);
}

#[test]
fn decider_lemmas_at_three() {
    let n = 3;
    for i in 0..n {
        for k in 0..=n as i64 {
            let mut d = DeciderStore::build(lits(n), ExtAxiomSet::new(), i, k, Formula::one(), Formula::zero()).unwrap();
            for g in d.immszel_proofs().unwrap() {
                assert_sound(&g, true);
            }
        }
    }
}
