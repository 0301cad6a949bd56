//! Seeded random formulas and small proofs in each system, used by the
//! tests, the benchmarks and the command line.

use rand::Rng;

use super::Result;
use crate::calculus::{Proof, ProofBuilder, SystemId};
use crate::semantics::sequent_valid;
use crate::syntax::{classify, ExtAxiomSet, ExtVar, Formula, PVar, Query, Sequent, Sort};

/// Which connectives besides decisions a random formula may use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Conn {
    Dec,
    Or,
    And,
}

/// A random formula over `p1..pn` (and the extension variables `ext`),
/// at most `depth` connectives deep.
pub fn random_formula(rng: &mut impl Rng, n: usize, ext: &[Formula], depth: usize, conn: Conn) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        let r: f64 = rng.gen();
        return if r < 0.12 {
            Formula::constant(rng.gen())
        } else if !ext.is_empty() && r < 0.4 {
            ext[rng.gen_range(0..ext.len())]
        } else {
            Formula::var(PVar::idx(rng.gen_range(1..=n)))
        };
    }
    let a = random_formula(rng, n, ext, depth - 1, conn);
    let b = random_formula(rng, n, ext, depth - 1, conn);
    if conn == Conn::Dec || rng.gen_bool(0.5) {
        Formula::dec(a, PVar::idx(rng.gen_range(1..=n)), b)
    } else if conn == Conn::Or {
        Formula::or(a, b)
    } else {
        Formula::and(a, b)
    }
}

/// Axioms `u1 .. um` (sort `U`), each a random co-eNDT formula over the
/// variables and the earlier `u`s.
pub fn random_u_axioms(rng: &mut impl Rng, n: usize, m: usize, depth: usize) -> (ExtAxiomSet, Vec<Formula>) {
    let mut e = ExtAxiomSet::new();
    let mut us = Vec::new();
    for i in 1..=m {
        let d = random_formula(rng, n, &us, depth, Conn::And);
        let v = ExtVar::named(Sort::U, &format!("r{i}"));
        e.define(v, d).expect("fresh");
        us.push(Formula::ext(v));
    }
    (e, us)
}

fn valid(s: &Sequent, e: &ExtAxiomSet) -> bool {
    sequent_valid(s, e).unwrap_or(false)
}

fn prove(b: &mut ProofBuilder, s: &Sequent) -> Result<usize> {
    let qs: Vec<Query> = s.queries().collect();
    let cl = b.defs_deep(&qs, 64)?;
    Ok(b.derive(s, &cl)?)
}

fn uses_and(f: Formula, e: &ExtAxiomSet) -> bool {
    classify(f, e).map(|c| c.uses_and).unwrap_or(false)
}

/// A co-eLNDT proof of a valid sequent. With `dt_conclusion` the
/// conclusion is DT and the proof cuts on a co-eNDT formula.
pub fn coelndt_sample(rng: &mut impl Rng, n: usize, dt_conclusion: bool) -> Result<Proof> {
    loop {
        let (e, us) = if rng.gen_bool(0.5) { random_u_axioms(rng, n, 2, 2) } else { (ExtAxiomSet::new(), vec![]) };
        let conn = if dt_conclusion { Conn::Dec } else { Conn::And };
        let ext: &[Formula] = if dt_conclusion { &[] } else { &us };
        let ga: Vec<Formula> = (0..rng.gen_range(1..=2)).map(|_| random_formula(rng, n, ext, 2, conn)).collect();
        let de: Vec<Formula> = (0..rng.gen_range(1..=2)).map(|_| random_formula(rng, n, ext, 2, conn)).collect();
        let s = Sequent::of(&ga, &de);
        if !valid(&s, &e) || ga.iter().any(|g| de.contains(g)) {
            continue;
        }
        let mut b = ProofBuilder::new(e.clone());
        let root = if dt_conclusion {
            let u = random_formula(rng, n, &us, 2, Conn::And);
            if !uses_and(u, &e) {
                continue;
            }
            let mut s1 = s.clone();
            s1.succ.push(Query::base(u));
            let mut s2 = s.clone();
            s2.ante.push(Query::base(u));
            let (l1, l2) = (prove(&mut b, &s1)?, prove(&mut b, &s2)?);
            b.derive(&s, &[l1, l2])?
        } else {
            if !s.queries().any(|q| uses_and(q.as_base().expect("base"), &e)) {
                continue;
            }
            prove(&mut b, &s)?
        };
        return Ok(b.finish(root).with_provenance("sample=co_elndt"));
    }
}

/// A query equivalent to `q`, with a few Boolean connectives around it.
fn wrap(rng: &mut impl Rng, q: Query, negation: bool, depth: usize) -> Query {
    if depth == 0 {
        return q;
    }
    let inner = wrap(rng, q, negation, depth - 1);
    match rng.gen_range(0..if negation { 5 } else { 4 }) {
        0 => Query::and(inner, inner),
        1 => Query::or(inner, Query::base(Formula::zero())),
        2 => Query::and(Query::base(Formula::one()), inner),
        3 => Query::or(inner, inner),
        _ => Query::not(Query::not(inner)),
    }
}

fn lk_sample(rng: &mut impl Rng, n: usize, positive: bool) -> Result<Proof> {
    let conn = if positive { Conn::Or } else { Conn::Dec };
    loop {
        let ga: Vec<Formula> = (0..rng.gen_range(1..=2)).map(|_| random_formula(rng, n, &[], 2, conn)).collect();
        let de: Vec<Formula> = (0..rng.gen_range(1..=2)).map(|_| random_formula(rng, n, &[], 2, conn)).collect();
        let s = Sequent::of(&ga, &de);
        let e = ExtAxiomSet::new();
        if !valid(&s, &e) || ga.iter().any(|g| de.contains(g)) {
            continue;
        }
        let parts: Vec<Query> = de.iter().map(|&d| wrap(rng, Query::base(d), !positive, 2)).collect();
        let q = Query::big_or(&parts);
        let mut b = ProofBuilder::new(e);
        let mut s1 = Sequent::of(&ga, &[]);
        s1.succ.push(q);
        let mut s2 = Sequent::of(&[], &de);
        s2.ante.push(q);
        let (l1, l2) = (prove(&mut b, &s1)?, prove(&mut b, &s2)?);
        let root = b.cut(l1, l2, q)?;
        let tag = if positive { "sample=lkpos_elndt" } else { "sample=lk_eldt" };
        return Ok(b.finish(root).with_provenance(tag));
    }
}

/// An LK(eLDT) proof of a DT sequent that cuts on a Boolean query.
pub fn lk_eldt_sample(rng: &mut impl Rng, n: usize) -> Result<Proof> {
    lk_sample(rng, n, false)
}

/// An LK⁺(eLNDT) proof of an NDT sequent that cuts on a positive query.
pub fn lkpos_elndt_sample(rng: &mut impl Rng, n: usize) -> Result<Proof> {
    lk_sample(rng, n, true)
}

/// An eL∃∀DT proof of `A |- B` (both NDT) through `X = U ∨ A` with `U`
/// co-eNDT; with `named` the cut formula is an `x` variable for `X`.
pub fn eafdt_sample(rng: &mut impl Rng, n: usize, named: bool) -> Result<Proof> {
    loop {
        let a = random_formula(rng, n, &[], 2, Conn::Or);
        let bf = random_formula(rng, n, &[], 2, Conn::Or);
        let u = random_formula(rng, n, &[], 2, Conn::And);
        let mut e = ExtAxiomSet::new();
        if a == bf || !uses_and(u, &e) || !valid(&Sequent::of(&[a], &[bf]), &e) || !valid(&Sequent::of(&[u], &[bf]), &e) {
            continue;
        }
        let xdef = Formula::or(u, a);
        let x = if named {
            let v = ExtVar::gen(Sort::X, "sample", vec![xdef], vec![]);
            e.ensure(v, xdef)?;
            Formula::ext(v)
        } else {
            xdef
        };
        let mut b = ProofBuilder::new(e);
        let l1 = prove(&mut b, &Sequent::of(&[a], &[x]))?;
        let l2 = prove(&mut b, &Sequent::of(&[x], &[bf]))?;
        let root = b.cut(l1, l2, Query::base(x))?;
        return Ok(b.finish(root).with_provenance("sample=el_ea_dt"));
    }
}

/// The system each sample generator targets.
pub fn sample_system(kind: &str) -> Option<SystemId> {
    Some(match kind {
        "co_elndt" => SystemId::CoELndt,
        "lk_eldt" => SystemId::LkELdt,
        "lkpos_elndt" => SystemId::LkPosELndt,
        "el_ea_dt" => SystemId::ELEaDt,
        _ => return None,
    })
}
