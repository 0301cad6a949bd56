use std::hint::black_box;
use std::path::PathBuf;

use bpw::calculus::{check_proof, proof_from_json, Mode, SystemId};
use bpw::constructions::{collapse_eafdt, ThresholdStore};
use bpw::games::{proof_to_strategy, strategy_to_proof_det, strategy_to_proof_nondet};
use bpw::syntax::{ExtAxiomSet, Formula, PVar};
use bpw_cli::bench::{chain_strategy, eafdt_chain, parity_middle};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn checking(c: &mut Criterion) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let text = std::fs::read_to_string(dir.join("eq21.json")).unwrap();
    let (eq21, _) = proof_from_json(&text, Some(&dir)).unwrap();
    c.bench_function("check/eq21", |b| b.iter(|| check_proof(black_box(&eq21), SystemId::ELndt, Mode::Multiset).unwrap()));
    let g = parity_middle(4).unwrap();
    c.bench_function("check/parity_middle_4", |b| b.iter(|| check_proof(black_box(&g.proof), g.system, Mode::Multiset).unwrap()));
}

fn thresholds(c: &mut Criterion) {
    let mut group = c.benchmark_group("thresholds");
    for n in [3usize, 5, 8] {
        let bs: Vec<Formula> = (1..=n).map(|i| Formula::var(PVar::idx(i))).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &bs, |b, bs| {
            b.iter(|| {
                let mut st = ThresholdStore::new(bs.clone(), ExtAxiomSet::new());
                st.lemma("mono_step", 0, n as i64 / 2).unwrap()
            })
        });
    }
    group.finish();
}

fn translations(c: &mut Criterion) {
    let mut group = c.benchmark_group("translations");
    group.sample_size(10);
    for n in [2usize, 3] {
        let g = parity_middle(n).unwrap();
        group.bench_with_input(BenchmarkId::new("proof_to_strategy", n), &g, |b, g| b.iter(|| proof_to_strategy(&g.proof, g.system).unwrap()));
    }
    for n in [2usize, 4] {
        let f = chain_strategy(n, true);
        group.bench_with_input(BenchmarkId::new("strategy_to_proof_det", n), &f, |b, f| {
            b.iter(|| strategy_to_proof_det(&f.strategy, &f.initial, &f.axioms).unwrap())
        });
    }
    for n in [1usize, 2] {
        let f = chain_strategy(n, false);
        group.bench_with_input(BenchmarkId::new("strategy_to_proof_nondet", n), &f, |b, f| {
            b.iter(|| strategy_to_proof_nondet(&f.strategy, &f.initial, &f.axioms).unwrap())
        });
    }
    let p = eafdt_chain(3).unwrap();
    group.bench_function("collapse_eafdt/3", |b| b.iter(|| collapse_eafdt(black_box(&p)).unwrap()));
    group.finish();
}

criterion_group!(benches, checking, thresholds, translations);
criterion_main!(benches);
