use std::collections::HashMap;

use super::dm::dm_strategy;
use super::state::{Contradiction, Detector, GameState, Kind};
use super::strategy::{verify_strategy, Strategy};
use super::{GameError, Result, System};
use crate::calculus::{ProofBuilder, SystemId};
use crate::constructions::{
    eliminate_bool_lk_eldt, eliminate_pos_lk_elndt, sim_line, ConstructionError, DeciderStore, GeneratedProof, ThresholdStore,
};
use crate::semantics::Simulator;
use crate::syntax::{ExtAxiomSet, Formula, QNode, Query, Sequent};

fn stage(name: &str) -> impl Fn(GameError) -> GameError + '_ {
    move |e| GameError::Stuck(format!("{name}: {e}"))
}

fn cstage(name: &str) -> impl Fn(ConstructionError) -> GameError + '_ {
    move |e| GameError::Stuck(format!("{name}: {e}"))
}

/// The contradiction a verified leaf claims, in the current state.
fn witness(det: &mut Detector, st: &GameState, clash: &Option<Contradiction>, kind: Kind) -> Result<Contradiction> {
    if let Some(c) = clash {
        if c.kind == kind {
            return Ok(c.clone());
        }
    }
    det.find_kind(st, kind).ok_or_else(|| GameError::Stuck(format!("no {kind} contradiction in {}", st.sequent())))
}

/// Clause lines for a simple contradiction, with every query mapped by `tr`.
fn leaf_clauses(
    b: &mut ProofBuilder,
    sim: &mut Simulator,
    c: &Contradiction,
    tr: &mut dyn FnMut(Query) -> Result<Query>,
) -> Result<Vec<usize>> {
    let mut cl = vec![b.zero_l(), b.one_r()];
    if c.kind == Kind::Similarity {
        let lo = c.witness.iter().find(|w| !w.1).and_then(|w| w.0.as_base());
        let hi = c.witness.iter().find(|w| w.1).and_then(|w| w.0.as_base());
        if let (Some(lo), Some(hi)) = (lo, hi) {
            cl.push(sim_line(b, sim, lo, hi)?);
        }
    }
    for &(q, _) in &c.witness {
        let t = tr(q)?;
        cl.extend(b.defs(t)?);
        cl.push(b.id(t));
    }
    Ok(cl)
}

/// An eLDT proof of `Γ |- Δ` from a DB strategy winning from `{Γ ↦ 1,
/// Δ ↦ 0}`. Asks become cuts in LK(eLDT) and the Boolean queries are then
/// compiled away.
pub fn strategy_to_proof_det(s: &Strategy, initial: &[(Query, bool)], e: &ExtAxiomSet) -> Result<GeneratedProof> {
    verify_strategy(s, initial, e, System::DB).map_err(stage("verification"))?;
    let (mut st, clash) = GameState::from_pairs(initial);
    let dropped = initial.iter().copied().filter(|&(q, b)| st.get(q) != Some(b)).collect();
    let mut w = DetWalk { b: ProofBuilder::new(e.clone()), sim: Simulator::new(e), det: Detector::new(e, System::DB), clash, dropped };
    let root = w.walk(s, &mut st)?;
    let lk = GeneratedProof::new(w.b.finish(root).with_provenance("thm=strategy_to_proof_det stage=lk"), SystemId::LkELdt);
    lk.check().map_err(|e| GameError::Stuck(format!("LK(eLDT) stage: line {}: {}", e.id, e.kind)))?;
    eliminate_bool_lk_eldt(&lk.proof).map_err(cstage("Boolean elimination"))
}

struct DetWalk<'a> {
    b: ProofBuilder,
    sim: Simulator<'a>,
    det: Detector<'a>,
    clash: Option<Contradiction>,
    dropped: Vec<(Query, bool)>,
}

impl DetWalk<'_> {
    fn walk(&mut self, s: &Strategy, st: &mut GameState) -> Result<usize> {
        match s {
            Strategy::Open => Err(GameError::Stuck("open leaf".into())),
            Strategy::Leaf(kind) => {
                let c = witness(&mut self.det, st, &self.clash, *kind)?;
                let cl = leaf_clauses(&mut self.b, &mut self.sim, &c, &mut |q| Ok(q))?;
                let mut target = st.sequent();
                for &(q, b) in &self.dropped {
                    if b { target.ante.push(q) } else { target.succ.push(q) }
                }
                Ok(self.b.derive(&target, &cl)?)
            }
            Strategy::Ask(q, on0, on1) => {
                if let Some(v) = st.get(*q) {
                    return self.walk(if v { on1 } else { on0 }, st);
                }
                let mut kids = [0; 2];
                for (v, child) in [(false, on0), (true, on1)] {
                    st.assign(*q, v);
                    let r = self.walk(child, st);
                    st.undo();
                    kids[v as usize] = r?;
                }
                Ok(self.b.cut(kids[0], kids[1], *q)?)
            }
        }
    }
}

/// An eLNDT proof of the eNDT sequent `Γ |- Δ` from an NB strategy winning
/// from `{Γ ↦ 1, Δ ↦ 0}`.
///
/// The strategy is put in De Morgan form; for each count `k` the negated
/// formulas `¬B_i` are read as the `k`-deciders, giving LK⁺(eLNDT) proofs of
/// `Thr_k, Γ |- Δ, Thr_{k+1}` that chain into `Γ |- Δ`.
pub fn strategy_to_proof_nondet(s: &Strategy, initial: &[(Query, bool)], e: &ExtAxiomSet) -> Result<GeneratedProof> {
    if let Some((q, _)) = initial.iter().find(|(q, _)| !q.is_base()) {
        return Err(GameError::Input(format!("initial query {q} is not an eNDT formula")));
    }
    verify_strategy(s, initial, e, System::NB).map_err(stage("verification"))?;
    if let Some(&(q, _)) = initial.iter().find(|&&(q, b)| b && initial.contains(&(q, false))) {
        let mut b = ProofBuilder::new(e.clone());
        let ax = b.id(q);
        let concl = Sequent::new(
            initial.iter().filter(|p| p.1).map(|p| p.0).collect(),
            initial.iter().filter(|p| !p.1).map(|p| p.0).collect(),
        );
        let root = b.derive(&concl, &[ax])?;
        return Ok(GeneratedProof::new(b.finish(root).with_provenance("thm=strategy_to_proof_nondet stage=clash"), SystemId::ELndt));
    }
    let (dm, dm_init) = dm_strategy(s, initial, e).map_err(stage("De Morgan translation"))?;
    verify_strategy(&dm, &dm_init, e, System::NB).map_err(stage("De Morgan verification"))?;

    let mut bs: Vec<Formula> = Vec::new();
    for q in dm.queries().into_iter().chain(dm_init.iter().map(|p| p.0)) {
        collect_negated(q, &mut bs);
    }
    let n = bs.len();
    let concl = GameState::from_pairs(initial).0.sequent();
    let mut w = NondetWalk {
        thr: ThresholdStore::new(bs.clone(), e.clone()),
        index: bs.iter().enumerate().map(|(i, &b)| (b, i)).collect(),
        deciders: HashMap::new(),
        imm: HashMap::new(),
        sim: Simulator::new(e),
        det: Detector::new(e, System::NB),
        k: 0,
    };
    let mut lines = Vec::new();
    for k in 0..=n as i64 {
        w.k = k;
        let (mut st, _) = GameState::from_pairs(&dm_init);
        let line = w.walk(&dm, &mut st).map_err(stage(&format!("k = {k}")))?;
        lines.push(line);
    }
    let z = w.thr.mono_zero(0, 0).map_err(cstage("caps"))?;
    let big = w.thr.mono_big(0, n as i64 + 1).map_err(cstage("caps"))?;
    lines.extend([z, big]);
    let b = &mut w.thr.pos.builder;
    let root = b.derive(&concl, &lines).map_err(|e| GameError::Stuck(format!("chaining: {e}")))?;
    let lk = GeneratedProof::new(b.finish(root).with_provenance(format!("thm=strategy_to_proof_nondet n={n} stage=lkpos")), SystemId::LkPosELndt);
    lk.check().map_err(|e| GameError::Stuck(format!("LK⁺(eLNDT) stage: line {}: {}", e.id, e.kind)))?;
    eliminate_pos_lk_elndt(&lk.proof).map_err(cstage("positive elimination"))
}

fn collect_negated(q: Query, out: &mut Vec<Formula>) {
    match q.node() {
        QNode::Base(_) => {}
        QNode::Not(a) => match a.as_base() {
            Some(f) => {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
            None => collect_negated(a, out),
        },
        QNode::Or(a, b) | QNode::And(a, b) => {
            collect_negated(a, out);
            collect_negated(b, out);
        }
    }
}

struct NondetWalk<'a> {
    thr: ThresholdStore,
    index: HashMap<Formula, usize>,
    deciders: HashMap<(usize, i64), Formula>,
    imm: HashMap<(usize, i64), [usize; 4]>,
    sim: Simulator<'a>,
    det: Detector<'a>,
    k: i64,
}

impl NondetWalk<'_> {
    fn with_decider<R>(&mut self, i: usize, f: impl FnOnce(&mut DeciderStore) -> crate::constructions::Result<R>) -> Result<R> {
        let thr = std::mem::replace(&mut self.thr, ThresholdStore::new(vec![], ExtAxiomSet::new()));
        let mut d = DeciderStore::new(thr, i, self.k, Formula::one(), Formula::zero())?;
        let r = f(&mut d);
        self.thr = d.thr;
        Ok(r?)
    }

    fn decider(&mut self, i: usize) -> Result<Formula> {
        if let Some(&d) = self.deciders.get(&(i, self.k)) {
            return Ok(d);
        }
        let d = self.with_decider(i, |d| d.entry())?;
        self.deciders.insert((i, self.k), d);
        Ok(d)
    }

    fn immszel(&mut self, i: usize) -> Result<[usize; 4]> {
        if let Some(&l) = self.imm.get(&(i, self.k)) {
            return Ok(l);
        }
        let l = self.with_decider(i, |d| d.immszel_lines())?;
        self.imm.insert((i, self.k), l);
        Ok(l)
    }

    /// `Q^k`: each `¬B_i` becomes the `k`-decider for `B_i`.
    fn tr(&mut self, q: Query) -> Result<Query> {
        Ok(match q.node() {
            QNode::Base(_) => q,
            QNode::Not(a) => {
                let f = a.as_base().ok_or_else(|| GameError::Stuck(format!("{q} is not in De Morgan form")))?;
                Query::base(self.decider(self.index[&f])?)
            }
            QNode::Or(a, b) => Query::or(self.tr(a)?, self.tr(b)?),
            QNode::And(a, b) => Query::and(self.tr(a)?, self.tr(b)?),
        })
    }

    /// `Thr_k, Γ^k |- Δ^k, Thr_{k+1}` for the state `{Γ ↦ 1, Δ ↦ 0}`.
    fn target(&mut self, st: &GameState) -> Result<Sequent> {
        let s = st.sequent();
        let mut ante = vec![Query::base(self.thr.thr(0, self.k)?)];
        let mut succ = Vec::new();
        for &q in &s.ante {
            ante.push(self.tr(q)?);
        }
        for &q in &s.succ {
            succ.push(self.tr(q)?);
        }
        succ.push(Query::base(self.thr.thr(0, self.k + 1)?));
        Ok(Sequent::new(ante, succ))
    }

    fn walk(&mut self, s: &Strategy, st: &mut GameState) -> Result<usize> {
        match s {
            Strategy::Open => Err(GameError::Stuck("open leaf".into())),
            Strategy::Leaf(kind) => {
                let c = witness(&mut self.det, st, &None, *kind)?;
                let target = self.target(st)?;
                let mut cl = Vec::new();
                let negated = match (c.kind, c.witness.as_slice()) {
                    (Kind::ConnectiveNot, [(a, _), _]) => a.as_base(),
                    _ => None,
                };
                if let Some(f) = negated {
                    let imm = self.immszel(self.index[&f])?;
                    cl.extend([imm[1], imm[2]]);
                }
                let mut qs = Vec::new();
                for &(q, _) in &c.witness {
                    qs.push(self.tr(q)?);
                }
                let b = &mut self.thr.pos.builder;
                cl.extend([b.zero_l(), b.one_r()]);
                if negated.is_none() {
                    let map: HashMap<Query, Query> = c.witness.iter().map(|w| w.0).zip(qs.iter().copied()).collect();
                    cl.extend(leaf_clauses(b, &mut self.sim, &c, &mut |q| Ok(map.get(&q).copied().unwrap_or(q)))?);
                }
                Ok(b.derive(&target, &cl)?)
            }
            Strategy::Ask(q, on0, on1) => {
                if let Some(v) = st.get(*q) {
                    return self.walk(if v { on1 } else { on0 }, st);
                }
                let mut kids = [0; 2];
                for (v, child) in [(false, on0), (true, on1)] {
                    st.assign(*q, v);
                    let r = self.walk(child, st);
                    st.undo();
                    kids[v as usize] = r?;
                }
                let t = self.tr(*q)?;
                Ok(self.thr.pos.builder.cut(kids[0], kids[1], t)?)
            }
        }
    }
}
