//! Generator families behind `bpw bench` and the fitted acceptance checks.

use std::ops::RangeInclusive;
use std::time::Instant;

use bpw::calculus::{Proof, ProofBuilder};
use bpw::constructions::{collapse_eafdt, excluded_middle, DeciderStore, GeneratedProof, ThresholdStore};
use bpw::games::{proof_to_strategy, strategy_to_proof_det, strategy_to_proof_nondet, Kind, Strategy, StrategyFile, System};
use bpw::syntax::{ExtAxiomSet, ExtVar, Formula, PVar, Query, Sequent, Sort};
use serde::Serialize;

pub const FAMILIES: [&str; 7] = ["thresholds", "decider", "immszel", "proof2strat", "strat2proof-det", "strat2proof-nondet", "collapse"];

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub family: String,
    pub param: usize,
    pub size: u64,
    pub depth: usize,
    pub ms: f64,
}

fn vars(n: usize) -> Vec<Formula> {
    (1..=n).map(|i| Formula::var(PVar::idx(i))).collect()
}

fn checked(g: GeneratedProof) -> Result<GeneratedProof, String> {
    g.check().map_err(|e| format!("generated proof fails at line {}: {}", e.id, e.kind))?;
    Ok(g)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `par(n,0)` and an isomorphic copy: `n`-bit parity as a deterministic
/// program with `2n` extension variables.
pub fn parity_pair(n: usize) -> (Formula, Formula, ExtAxiomSet) {
    let mut e = ExtAxiomSet::new();
    let mut roots = [Formula::zero(); 2];
    for (copy, tag) in ["par", "cpar"].into_iter().enumerate() {
        let mut prev = [Formula::zero(), Formula::one()];
        for k in 1..=n {
            let mut cur = [Formula::zero(); 2];
            for f in 0..2 {
                let v = ExtVar::gen(Sort::E, tag, vec![], vec![k as i64, f as i64]);
                let def = Formula::dec(prev[f], PVar::idx(k), prev[1 - f]);
                e.ensure(v, def).expect("fresh");
                cur[f] = Formula::ext(v);
            }
            prev = cur;
        }
        roots[copy] = prev[0];
    }
    (roots[0], roots[1], e)
}

/// `t_k := dec(t_{k-1}, p_k, t_{k-1})` (deterministic) or
/// `c_k := dec(c_{k-1}, p_k, 0) ∨ dec(0, p_k, c_{k-1})` over `t_0 = c_0 = 1`,
/// with a winning strategy from `{t_n ↦ 0}` that walks down the chain,
/// asking `¬t_{k-1}` before `t_{k-1}`.
pub fn chain_strategy(n: usize, det: bool) -> StrategyFile {
    let mut e = ExtAxiomSet::new();
    let mut prev = Formula::one();
    let mut levels = Vec::new();
    for k in 1..=n {
        let p = PVar::idx(k);
        let (tag, def) = if det {
            ("tch", Formula::dec(prev, p, prev))
        } else {
            ("cch", Formula::or(Formula::dec(prev, p, Formula::zero()), Formula::dec(Formula::zero(), p, prev)))
        };
        let v = ExtVar::gen(Sort::E, tag, vec![], vec![k as i64]);
        e.ensure(v, def).expect("fresh");
        levels.push((prev, p, def));
        prev = Formula::ext(v);
    }
    let mut s = Strategy::Leaf(Kind::BoolConst);
    for &(below, p, def) in &levels {
        let b = Query::base(below);
        let split = Strategy::ask(Query::base(Formula::var(p)), Strategy::Leaf(Kind::Decision), Strategy::Leaf(Kind::Decision));
        let mut body = Strategy::ask(
            Query::not(b),
            Strategy::ask(b, Strategy::Leaf(Kind::ConnectiveNot), split),
            Strategy::ask(b, s, Strategy::Leaf(Kind::ConnectiveNot)),
        );
        if let Some((l, r)) = Query::base(def).split_or() {
            body = Strategy::ask(l, Strategy::ask(r, body, Strategy::Leaf(Kind::ConnectiveOr)), Strategy::Leaf(Kind::ConnectiveOr));
        }
        s = Strategy::ask(Query::base(def), body, Strategy::Leaf(Kind::Extension));
    }
    let system = if det { System::DB } else { System::NB };
    StrategyFile::new(system, e, vec![(Query::base(prev), false)], s)
}

fn prove(b: &mut ProofBuilder, s: &Sequent) -> Result<usize, String> {
    let qs: Vec<Query> = s.queries().collect();
    let cl = b.defs_deep(&qs, 64).map_err(err)?;
    b.derive(s, &cl).map_err(err)
}

fn nested_or(fs: &[Formula], left: bool) -> Formula {
    let mut it: Box<dyn Iterator<Item = &Formula>> = if left { Box::new(fs.iter()) } else { Box::new(fs.iter().rev()) };
    let first = *it.next().expect("nonempty");
    it.fold(first, |acc, &f| if left { Formula::or(acc, f) } else { Formula::or(f, acc) })
}

/// An eL∃∀DT proof of `p_1 ∨ (… ∨ p_n) |- (p_1 ∨ …) ∨ p_n` cutting on
/// `x := (p_1 ∧ … ∧ p_n) ∨ A`.
pub fn eafdt_chain(n: usize) -> Result<Proof, String> {
    let ps = vars(n.max(1));
    let a = nested_or(&ps, false);
    let bf = nested_or(&ps, true);
    let u = ps[1..].iter().fold(ps[0], |acc, &f| Formula::and(acc, f));
    let xdef = Formula::or(u, a);
    let v = ExtVar::gen(Sort::X, "chain", vec![xdef], vec![]);
    let mut e = ExtAxiomSet::new();
    e.ensure(v, xdef).map_err(err)?;
    let x = Formula::ext(v);
    let mut b = ProofBuilder::new(e);
    let l1 = prove(&mut b, &Sequent::of(&[a], &[x]))?;
    let l2 = prove(&mut b, &Sequent::of(&[x], &[bf]))?;
    let root = b.cut(l1, l2, Query::base(x)).map_err(err)?;
    Ok(b.finish(root).with_provenance(format!("family=eafdt_chain n={n}")))
}

fn thresholds(n: usize) -> Result<(u64, usize), String> {
    let mut st = ThresholdStore::new(vars(n), ExtAxiomSet::new());
    let mut size = 0;
    for k in 0..=n as i64 {
        size += checked(st.lemma("mono_step", 0, k).map_err(err)?)?.proof.size();
    }
    Ok((size, 0))
}

/// Largest cell count over all `i < N`, `k ∈ [0,N]`.
pub fn decider_cells(n: usize) -> Result<usize, String> {
    let mut worst = 0;
    for i in 0..n {
        for k in 0..=n as i64 {
            let mut d = DeciderStore::build(vars(n), ExtAxiomSet::new(), i, k, Formula::one(), Formula::zero()).map_err(err)?;
            d.entry().map_err(err)?;
            worst = worst.max(d.cell_count());
        }
    }
    Ok(worst)
}

fn immszel(n: usize) -> Result<(u64, usize), String> {
    let mut d = DeciderStore::build(vars(n), ExtAxiomSet::new(), 0, (n / 2) as i64, Formula::one(), Formula::zero()).map_err(err)?;
    let mut size = 0;
    for g in d.immszel_proofs().map_err(err)? {
        size += checked(g)?.proof.size();
    }
    Ok((size, 0))
}

/// The proof of `|- A, Ā` for `n`-bit parity.
pub fn parity_middle(n: usize) -> Result<GeneratedProof, String> {
    let (a, _, e) = parity_pair(n);
    let [r, _] = excluded_middle(a, &e).map_err(err)?;
    checked(r)
}

fn proof2strat(n: usize) -> Result<(u64, usize), String> {
    let g = parity_middle(n)?;
    let s = proof_to_strategy(&g.proof, g.system).map_err(err)?;
    Ok((g.proof.size(), s.depth()))
}

fn strat2proof(n: usize, det: bool) -> Result<(u64, usize), String> {
    let f = chain_strategy(n, det);
    let out = if det { strategy_to_proof_det(&f.strategy, &f.initial, &f.axioms) } else { strategy_to_proof_nondet(&f.strategy, &f.initial, &f.axioms) };
    let out = checked(out.map_err(err)?)?;
    Ok((out.proof.size(), f.strategy.depth()))
}

fn collapse(n: usize) -> Result<(u64, usize), String> {
    let p = eafdt_chain(n)?;
    let g = checked(collapse_eafdt(&p).map_err(err)?)?;
    Ok((g.proof.size(), 0))
}

/// Runs one family over `params`. Every family is deterministic.
pub fn run_family(family: &str, params: RangeInclusive<usize>) -> Result<Vec<BenchRecord>, String> {
    if !FAMILIES.contains(&family) {
        return Err(format!("unknown family `{family}` (expected one of {})", FAMILIES.join(", ")));
    }
    let mut rows = Vec::new();
    for param in params {
        let t = Instant::now();
        let (size, depth) = match family {
            "thresholds" => thresholds(param)?,
            "decider" => (decider_cells(param)? as u64, 0),
            "immszel" => immszel(param)?,
            "proof2strat" => proof2strat(param)?,
            "strat2proof-det" => strat2proof(param, true)?,
            "strat2proof-nondet" => strat2proof(param, false)?,
            _ => collapse(param)?,
        };
        let ms = t.elapsed().as_secs_f64() * 1e3;
        rows.push(BenchRecord { family: family.to_string(), param, size, depth, ms });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRecord]) -> Result<String, String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["family", "param", "size", "depth", "ms"]).map_err(err)?;
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    String::from_utf8(w.into_inner().map_err(err)?).map_err(err)
}

/// Least-squares fit of `y = a·x + b`; returns `(a, b, R²)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let c = fit_poly(xs, ys, 1);
    (c.0[1], c.0[0], c.1)
}

/// Least-squares polynomial of the given degree; coefficients from the
/// constant term up, and `R²`.
pub fn fit_poly(xs: &[f64], ys: &[f64], degree: usize) -> (Vec<f64>, f64) {
    let m = xs.len();
    let a = nalgebra::DMatrix::from_fn(m, degree + 1, |i, j| xs[i].powi(j as i32));
    let y = nalgebra::DVector::from_column_slice(ys);
    let svd = a.clone().svd(true, true);
    let c = svd.solve(&y, 1e-12).expect("svd solve");
    let pred = &a * &c;
    let mean = ys.iter().sum::<f64>() / m as f64;
    let ss_tot: f64 = ys.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = ys.iter().zip(pred.iter()).map(|(v, p)| (v - p).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (c.iter().copied().collect(), r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fits() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let (a, b, r2) = fit_line(&xs, &[3.0, 5.0, 7.0, 9.0]);
        assert!((a - 2.0).abs() < 1e-9 && (b - 1.0).abs() < 1e-9 && (r2 - 1.0).abs() < 1e-12);
        let (c, r2) = fit_poly(&xs, &[1.0, 4.0, 9.0, 16.0], 2);
        assert!((c[2] - 1.0).abs() < 1e-9 && r2 > 0.999_999);
    }

    #[test]
    fn empty_range_gives_a_header() {
        let rows = run_family("thresholds", RangeInclusive::new(1, 0)).unwrap();
        assert_eq!(to_csv(&rows).unwrap(), "family,param,size,depth,ms\n");
    }
}
