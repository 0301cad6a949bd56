use std::collections::HashMap;

use super::{excess, finish, input_check, ConstructionError, GeneratedProof, PosAxiomStore, Result};
use crate::calculus::{Aux, Proof, Rule, SystemId};
use crate::syntax::{Formula, QNode, Query, Sequent};

struct PosCompiler {
    pos: PosAxiomStore,
    memo: HashMap<Query, Formula>,
}

impl PosCompiler {
    /// `Q ∨ R` becomes a base disjunction, `Q ∧ R` becomes `pdec(0,Q,R)`.
    fn compile(&mut self, q: Query) -> Result<Formula> {
        if let Some(&f) = self.memo.get(&q) {
            return Ok(f);
        }
        let f = match q.node() {
            QNode::Base(f) => f,
            QNode::Or(a, b) => Formula::or(self.compile(a)?, self.compile(b)?),
            QNode::And(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                self.pos.pdec(Formula::zero(), a, b)?
            }
            QNode::Not(_) => return Err(ConstructionError::Class(format!("negation in positive query {q}"))),
        };
        self.memo.insert(q, f);
        Ok(f)
    }

    fn compile_seq(&mut self, s: &Sequent) -> Result<Sequent> {
        let ante = s.ante.iter().map(|&q| self.compile(q).map(Query::base)).collect::<Result<Vec<_>>>()?;
        let succ = s.succ.iter().map(|&q| self.compile(q).map(Query::base)).collect::<Result<Vec<_>>>()?;
        Ok(Sequent::new(ante, succ))
    }

    fn and_parts(&mut self, qs: Vec<Query>) -> Result<(Formula, Formula)> {
        for q in qs {
            if let QNode::And(a, b) = q.node() {
                return Ok((self.compile(a)?, self.compile(b)?));
            }
        }
        Err(ConstructionError::Other("no conjunctive principal query".into()))
    }
}

/// Turns an LK⁺(eLNDT) proof into an eLNDT proof with the same base
/// conclusion, replacing each query-level `∧` by a positive decision.
pub fn eliminate_pos_lk_elndt(p: &Proof) -> Result<GeneratedProof> {
    input_check(p, SystemId::LkPosELndt)?;
    let concl = p.conclusion().ok_or_else(|| ConstructionError::Other("empty proof".into()))?;
    if concl.queries().any(|q| !q.is_base()) {
        return Err(ConstructionError::Class(format!("conclusion {concl} is not a base sequent")));
    }
    let mut pc = PosCompiler { pos: PosAxiomStore::new(p.axioms.clone()), memo: HashMap::new() };
    let zero = Query::base(Formula::zero());
    let mut map: HashMap<usize, usize> = HashMap::new();
    let by_id: HashMap<usize, &crate::calculus::ProofLine> = p.lines.iter().map(|m| (m.id, m)).collect();
    let mut root = 0;
    for l in &p.lines {
        let prem: Vec<usize> = l.prem.iter().map(|q| map[q]).collect();
        let target = pc.compile_seq(&l.seq)?;
        let first = l.prem.first().map(|&i| by_id[&i]);
        root = match (l.rule, first) {
            (Rule::AndL, Some(f)) if excess(&l.seq.ante, &f.seq.ante).iter().any(|q| matches!(q.node(), QNode::And(..))) => {
                let (a, b) = pc.and_parts(excess(&l.seq.ante, &f.seq.ante))?;
                let mut s0 = target.clone();
                s0.ante.retain(|&q| q != Query::base(pc.pos.pdec(Formula::zero(), a, b).expect("compiled")));
                s0.ante.push(zero);
                let z = pc.pos.builder.zero_l();
                let l0 = pc.pos.builder.adapt(z, &s0)?;
                pc.pos.left_rule(&target, Formula::zero(), a, b, l0, prem[0])?
            }
            (Rule::AndR, Some(f)) if excess(&l.seq.succ, &f.seq.succ).iter().any(|q| matches!(q.node(), QNode::And(..))) => {
                let (a, b) = pc.and_parts(excess(&l.seq.succ, &f.seq.succ))?;
                let mut ls = [0; 2];
                for (o, &pr) in ls.iter_mut().zip(&prem) {
                    let mut s = pc.pos.builder.seq(pr).clone();
                    s.succ.push(zero);
                    *o = pc.pos.builder.adapt(pr, &s)?;
                }
                pc.pos.right_rule(&target, Formula::zero(), a, b, ls[0], ls[1])?
            }
            _ => pc.pos.builder.push(&target, l.rule, Aux { pos: None, ..l.aux.clone() }, prem),
        };
        map.insert(l.id, root);
    }
    Ok(finish(&pc.pos.builder, root, SystemId::ELndt, format!("thm=pos_elim from={}", p.len())))
}
