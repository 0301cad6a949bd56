use std::path::{Path, PathBuf};
use std::process::Command;

use bpw::calculus::{proof_to_json, SystemId};
use bpw::constructions::samples::{coelndt_sample, eafdt_sample};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn bpw(args: &[&str]) -> Run {
    let mut argv = vec!["bpw"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = bpw_cli::run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(r.out.trim()).unwrap_or_else(|e| panic!("{e}: {}", r.out))
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.display().to_string()
}

#[test]
fn documented_invocations() {
    let r = bpw(&["check-proof", "--system", "elndt", "--proof", &data("eq21.json")]);
    assert_eq!(r.code, 0, "{}", r.err);
    let r = bpw(&["eval", "--axioms", &data("fig1.ax"), "--formula", "e11", "--assign", "p1=1,p2=1,p3=0,p4=0"]);
    assert_eq!((r.code, r.out.as_str()), (0, "1\n"));
    let r = bpw(&["simulates", "--axioms", &data("fig1.ax"), "e11", "e11"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("Refl"));
}

#[test]
fn exit_codes() {
    assert_eq!(bpw(&["--help"]).code, 0);
    assert_eq!(bpw(&["--version"]).code, 0);
    assert_eq!(bpw(&["frobnicate"]).code, 2);
    assert_eq!(bpw(&["eval", "--formula", "dec(0,p1"]).code, 2);
    assert_eq!(bpw(&["check-proof", "--proof", "/nonexistent/proof.json"]).code, 2);
    assert_eq!(bpw(&["bench", "no-such-family"]).code, 2);
    assert_eq!(bpw(&["valid", "p1 |- or(p1,p2)"]).code, 0);
    let r = bpw(&["valid", "p1 |- p2"]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("p1=1,p2=0"));
    assert_eq!(bpw(&["simulates", "--axioms", &data("fig1.ax"), "e42", "e43"]).code, 1);
}

#[test]
fn truth_table_and_json_output() {
    let r = bpw(&["eval", "--axioms", &data("fig1.ax"), "--formula", "e11", "--json"]);
    let v = json(&r);
    assert_eq!(v["command"], "eval");
    assert_eq!(v["ok"], true);
    assert_eq!(v["true_count"], 11);
    assert_eq!(v["universe"], serde_json::json!(["p1", "p2", "p3", "p4"]));
    let r = bpw(&["check-strategy", "--strategy", &data("fig3_right.json"), "--json"]);
    let v = json(&r);
    assert_eq!((v["depth"].as_u64(), v["system"].as_str()), (Some(5), Some("NB")));
    let r = bpw(&["check-strategy", "--strategy", &data("fig3_left.json"), "--system", "DB"]);
    assert_eq!(r.code, 0, "{}", r.err);
}

#[test]
fn parse_echoes_and_classifies() {
    let r = bpw(&["parse", "qand(p1,not(or(p2,p3)))"]);
    assert_eq!(r.out, "and(p1,not(or(p2,p3)))\n");
    let r = bpw(&["parse", "dec(p1,p2,or(0,1))"]);
    assert_eq!(r.out, "dec(p1,p2,or(0,1))\tNDT\n");
    let r = bpw(&["parse", "--axioms", &data("fig1.ax")]);
    assert!(r.out.starts_with("e41 := dec(0,p4,0)\n"));
    assert_eq!(r.out.lines().count(), 10);
}

#[test]
fn proof_and_strategy_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json").display().to_string();
    let r = bpw(&["proof-to-strategy", "--proof", &data("eq21.json"), "--out", &s]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(bpw(&["check-strategy", "--strategy", &s]).code, 0);
    let p = dir.path().join("d.json").display().to_string();
    let r = bpw(&["strategy-to-proof", "--strategy", &data("fig3_left.json"), "--out", &p]);
    assert_eq!(r.code, 0, "{}", r.err);
    let r = bpw(&["check-proof", "--proof", &p, "--semantic"]);
    assert_eq!(r.code, 0, "{}", r.out);
    let p = dir.path().join("n.json").display().to_string();
    assert_eq!(bpw(&["strategy-to-proof", "--strategy", &data("fig3_right.json"), "--out", &p]).code, 0);
    let r = bpw(&["check-proof", "--proof", &p, "--json"]);
    assert_eq!(json(&r)["conclusion"], "e42 |- e43");
}

#[test]
fn generators_write_checkable_proofs() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json").display().to_string();
    assert_eq!(bpw(&["gen-thresholds", "--n", "3", "--lemma", "mono_step", "--k", "1", "--out", &t]).code, 0);
    assert_eq!(bpw(&["check-proof", "--proof", &t, "--semantic"]).code, 0);
    let r = bpw(&["gen-thresholds", "--n", "3", "--check", "--json"]);
    assert_eq!(json(&r)["mismatches"], 0);
    let r = bpw(&["gen-decider", "--n", "3", "--i", "1", "--k", "2", "--json"]);
    let v = json(&r);
    assert!(v["cells"].as_u64().unwrap() <= v["bound"].as_u64().unwrap());
    let r = bpw(&["prove-immszel", "--n", "2", "--k", "1", "--semantic", "--json"]);
    assert_eq!(r.code, 0);
    assert_eq!(json(&r)["proofs"].as_array().unwrap().len(), 4);
    let r = bpw(&["prove-sim", "--axioms", &data("fig1.ax"), "e21", "e21"]);
    assert_eq!(r.code, 0, "{}", r.err);
}

#[test]
fn dualize_and_collapse_sampled_proofs() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let co = coelndt_sample(&mut rng, 3, false).unwrap();
    let co = write(dir.path(), "co.json", &proof_to_json(&co, SystemId::CoELndt));
    let r = bpw(&["dualize", "--proof", &co, "--json"]);
    let v = json(&r);
    assert_eq!(v["ok"], true, "{}", r.out);
    assert!(v["ratio"].as_f64().unwrap() <= 4.0);
    let ea = eafdt_sample(&mut rng, 3, true).unwrap();
    let ea = write(dir.path(), "ea.json", &proof_to_json(&ea, SystemId::ELEaDt));
    let out = dir.path().join("c.json").display().to_string();
    assert_eq!(bpw(&["collapse-eafdt", "--proof", &ea, "--out", &out]).code, 0);
    assert_eq!(bpw(&["check-proof", "--proof", &out]).code, 0);
    assert_eq!(bpw(&["collapse-eafdt", "--proof", &ea, "--k", "1"]).code, 0);
    let r = bpw(&["dualize", "--formula", "and(p1,p2)"]);
    assert!(r.out.contains("or(dec(1,p1,0),dec(1,p2,0))"), "{}", r.out);
}

#[test]
fn scripted_and_seeded_play() {
    let r = bpw(&["play", "--strategy", &data("fig3_left.json"), "--answers", "0"]);
    assert_eq!(r.out, "ASK not(or(p1,not(p1)))\nANS 0\nWIN connective_not\n");
    let a = bpw(&["play", "--strategy", &data("fig3_right.json"), "--seed", "9"]);
    let b = bpw(&["play", "--strategy", &data("fig3_right.json"), "--seed", "9"]);
    assert_eq!((a.code, &a.out), (0, &b.out));
    assert_eq!(bpw(&["play", "--strategy", &data("fig3_right.json"), "--answers", "1"]).code, 2);
}

#[test]
fn bench_csv() {
    let r = bpw(&["bench", "thresholds", "--from", "3", "--to", "2"]);
    assert_eq!(r.out, "family,param,size,depth,ms\n");
    let r = bpw(&["bench", "thresholds", "--from", "2", "--to", "8"]);
    let mut rd = csv::Reader::from_reader(r.out.as_bytes());
    let sizes: Vec<u64> = rd.records().map(|x| x.unwrap()[2].parse().unwrap()).collect();
    assert_eq!(sizes.len(), 7);
    assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_bpw");
    let mut outs = Vec::new();
    for i in 0..2 {
        let o = dir.path().join(format!("{i}.json"));
        let st = Command::new(exe)
            .args(["prove-immszel", "--n", "2", "--k", "1", "--out"])
            .arg(&o)
            .status()
            .unwrap();
        assert!(st.success());
        outs.push(std::fs::read(&o).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    let a = Command::new(exe).args(["gen-thresholds", "--n", "4"]).output().unwrap();
    let b = Command::new(exe).args(["gen-thresholds", "--n", "4"]).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
