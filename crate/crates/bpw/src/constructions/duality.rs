use std::collections::HashMap;

use super::{finish, input_check, sq, ConstructionError, GeneratedProof, Result};
use crate::calculus::{Aux, Dir, Proof, ProofBuilder, Rule, SystemId};
use crate::syntax::{classify, ExtAxiomSet, ExtVar, Formula, Node, Query, Sequent, Sort};

/// The fresh eNDT variable `ū` standing for the negation of `u`.
pub fn bar_var(v: ExtVar) -> ExtVar {
    ExtVar::gen(Sort::E, "bar", vec![Formula::ext(v)], vec![])
}

/// Negation of co-eNDT formulas, with the dual axioms collected in a
/// builder so that proofs about them can share its lines.
pub struct Negation {
    pub builder: ProofBuilder,
    memo: HashMap<Formula, Formula>,
}

impl Negation {
    pub fn new(base: ExtAxiomSet) -> Negation {
        Negation { builder: ProofBuilder::new(base), memo: HashMap::new() }
    }

    pub fn axioms(&self) -> &ExtAxiomSet {
        &self.builder.axioms
    }

    /// `Ū`: `0 ↔ 1`, decisions pointwise, `∧ → ∨`, `p → dec(1,p,0)`.
    pub fn negate(&mut self, f: Formula) -> Result<Formula> {
        if let Some(&g) = self.memo.get(&f) {
            return Ok(g);
        }
        let g = match f.node() {
            Node::Zero => Formula::one(),
            Node::One => Formula::zero(),
            Node::Var(p) => Formula::dec(Formula::one(), p, Formula::zero()),
            Node::Dec(a, p, b) => Formula::dec(self.negate(a)?, p, self.negate(b)?),
            Node::And(a, b) => Formula::or(self.negate(a)?, self.negate(b)?),
            Node::Ext(v) => Formula::ext(self.bar(v)?),
            Node::Or(..) => return Err(ConstructionError::Class(format!("{f} is not co-eNDT"))),
        };
        self.memo.insert(f, g);
        Ok(g)
    }

    /// `ū`, defined as the negation of `u`'s definition.
    pub fn bar(&mut self, v: ExtVar) -> Result<ExtVar> {
        let w = bar_var(v);
        if !self.builder.axioms.contains(w) {
            let d = self.builder.axioms.def(v).ok_or_else(|| ConstructionError::Class(format!("{v} is undefined")))?;
            let nd = self.negate(d)?;
            self.builder.axioms.ensure(w, nd)?;
        }
        Ok(w)
    }

    fn negate_all(&mut self, qs: &[Query]) -> Result<Vec<Query>> {
        qs.iter()
            .map(|q| {
                let f = q.as_base().ok_or_else(|| ConstructionError::Class(format!("query {q} in a co-eNDT proof")))?;
                self.negate(f).map(Query::base)
            })
            .collect()
    }

    /// `Δ̄ |- Γ̄` for `Γ |- Δ`.
    pub fn flip(&mut self, s: &Sequent) -> Result<Sequent> {
        Ok(Sequent::new(self.negate_all(&s.succ)?, self.negate_all(&s.ante)?))
    }

    /// Lines `|- A, Ā` and `A, Ā |-` for eDT `A`.
    pub fn excluded_middle(&mut self, a: Formula) -> Result<[usize; 2]> {
        let na = self.negate(a)?;
        let targets = [sq(&[], &[a, na]), sq(&[a, na], &[])];
        if let [Some(x), Some(y)] = targets.each_ref().map(|t| self.builder.lookup(t)) {
            return Ok([x, y]);
        }
        let b = &mut self.builder;
        let mut cl = vec![b.zero_l(), b.one_r()];
        match a.node() {
            Node::Zero | Node::One => {}
            Node::Var(_) => cl.extend(b.dec_clauses(na)),
            Node::Dec(x, _, y) => {
                cl.extend(b.dec_clauses(a));
                cl.extend(b.dec_clauses(na));
                cl.extend(self.excluded_middle(x)?);
                cl.extend(self.excluded_middle(y)?);
            }
            Node::Ext(v) => {
                cl.extend(b.ext_clauses(v)?);
                let w = na.as_ext().expect("negated variable");
                cl.extend(b.ext_clauses(w)?);
                let d = self.builder.axioms.def(v).expect("negated above");
                cl.extend(self.excluded_middle(d)?);
            }
            Node::And(..) | Node::Or(..) => return Err(ConstructionError::Class(format!("{a} is not eDT"))),
        }
        Ok([self.builder.derive(&targets[0], &cl)?, self.builder.derive(&targets[1], &cl)?])
    }

    /// Translates a co-eLNDT proof line by line; returns the root line.
    pub fn dualize_into(&mut self, p: &Proof) -> Result<usize> {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut root = 0;
        for l in &p.lines {
            let prem: Vec<usize> = l.prem.iter().map(|q| map[q]).collect();
            let target = self.flip(&l.seq)?;
            let plain = |aux: &Aux| Aux { pos: None, ..aux.clone() };
            root = match l.rule {
                Rule::DecL | Rule::DecR => self.dec_step(l.rule, &target, &l.aux, &prem, &l.seq)?,
                Rule::Ext => {
                    let aux = match l.aux.ext {
                        Some((v, d)) => {
                            let d = if d == Dir::Lr { Dir::Rl } else { Dir::Lr };
                            Aux::ext(self.bar(v)?, d)
                        }
                        None => Aux::none(),
                    };
                    self.builder.push(&target, Rule::Ext, aux, prem)
                }
                Rule::Cut => self.builder.push(&target, Rule::Cut, Aux::none(), vec![prem[1], prem[0]]),
                r => {
                    let dual = match r {
                        Rule::ExL => Rule::ExR,
                        Rule::ExR => Rule::ExL,
                        Rule::WL => Rule::WR,
                        Rule::WR => Rule::WL,
                        Rule::CL => Rule::CR,
                        Rule::CR => Rule::CL,
                        Rule::ZeroL => Rule::OneR,
                        Rule::OneR => Rule::ZeroL,
                        Rule::ZeroR => Rule::OneL,
                        Rule::OneL => Rule::ZeroR,
                        Rule::AndL => Rule::OrR,
                        Rule::AndR => Rule::OrL,
                        Rule::Id => Rule::Id,
                        other => return Err(ConstructionError::Class(format!("rule {other} in a co-eLNDT proof"))),
                    };
                    self.builder.push(&target, dual, plain(&l.aux), prem)
                }
            };
            map.insert(l.id, root);
        }
        Ok(root)
    }

    /// `dec-l` becomes `dec-r` and vice versa, after cutting the premises
    /// against `|- p, p̄` (∘) and `p, p̄ |-` (•).
    fn dec_step(&mut self, rule: Rule, target: &Sequent, aux: &Aux, prem: &[usize], orig: &Sequent) -> Result<usize> {
        let principal = self.find_dec(rule, orig, aux)?;
        let Node::Dec(_, p, _) = principal.node() else { unreachable!() };
        let pv = Formula::var(p);
        let (pq, pbar) = (Query::base(pv), Query::base(self.negate(pv)?));
        let [em_r, em_l] = self.excluded_middle(pv)?;
        let nd = Query::base(self.negate(principal)?);
        let Node::Dec(nu, _, nv) = self.negate(principal)?.node() else { unreachable!() };
        let (nu, nv) = (Query::base(nu), Query::base(nv));
        let b = &mut self.builder;
        let circ = b.cut(em_r, prem[0], pbar)?;
        let bullet = b.cut(prem[1], em_l, pbar)?;
        let (s0, s1) = if rule == Rule::DecL {
            // Δ̄ |- p, Ū, Γ̄ and Δ̄, p |- V̄, Γ̄ under Δ̄ |- D̄, Γ̄.
            let mut s0 = target.clone();
            remove_one(&mut s0.succ, nd);
            let mut s1 = s0.clone();
            s0.succ.extend([pq, nu]);
            s1.ante.push(pq);
            s1.succ.push(nv);
            (s0, s1)
        } else {
            // Δ̄, Ū |- p, Γ̄ and Δ̄, p, V̄ |- Γ̄ under Δ̄, D̄ |- Γ̄.
            let mut s0 = target.clone();
            remove_one(&mut s0.ante, nd);
            let mut s1 = s0.clone();
            s0.ante.push(nu);
            s0.succ.push(pq);
            s1.ante.extend([pq, nv]);
            (s0, s1)
        };
        let l0 = b.adapt(circ, &s0)?;
        let l1 = b.adapt(bullet, &s1)?;
        let dual = if rule == Rule::DecL { Rule::DecR } else { Rule::DecL };
        Ok(b.push(target, dual, Aux::var(p), vec![l0, l1]))
    }

    fn find_dec(&self, rule: Rule, s: &Sequent, aux: &Aux) -> Result<Formula> {
        let side = if rule == Rule::DecL { &s.ante } else { &s.succ };
        side.iter()
            .filter_map(|q| q.as_base())
            .filter(|f| matches!(f.node(), Node::Dec(_, p, _) if aux.var.is_none_or(|v| v == p)))
            .find(|_| true)
            .ok_or_else(|| ConstructionError::Other(format!("no decision principal in {s}")))
    }
}

fn remove_one(v: &mut Vec<Query>, q: Query) {
    if let Some(i) = v.iter().position(|&x| x == q) {
        v.remove(i);
    }
}

/// `(Ū, 𝒰 ∪ Ū𝒰)` for a co-eNDT formula `U` over `𝒰`.
pub fn negate_coendt(u: Formula, e: &ExtAxiomSet) -> Result<(Formula, ExtAxiomSet)> {
    if !classify(u, e)?.is_coendt() {
        return Err(ConstructionError::Class(format!("{u} is not co-eNDT")));
    }
    let mut n = Negation::new(e.clone());
    let g = n.negate(u)?;
    Ok((g, n.builder.axioms))
}

/// Proofs of `|- A, Ā` and `A, Ā |-`, in LDT when `A` is DT.
pub fn excluded_middle(a: Formula, e: &ExtAxiomSet) -> Result<[GeneratedProof; 2]> {
    let c = classify(a, e)?;
    if !c.is_edt() {
        return Err(ConstructionError::Class(format!("{a} is not eDT")));
    }
    let sys = if c.is_dt() { SystemId::Ldt } else { SystemId::ELdt };
    let mut n = Negation::new(e.clone());
    let [r, l] = n.excluded_middle(a)?;
    Ok([
        finish(&n.builder, r, sys, format!("lemma=excluded_middle_r a={a}")),
        finish(&n.builder, l, sys, format!("lemma=excluded_middle_l a={a}")),
    ])
}

/// An eLNDT proof of `Δ̄ |- Γ̄` from a co-eLNDT proof of `Γ |- Δ`.
pub fn dualize_proof(p: &Proof) -> Result<GeneratedProof> {
    input_check(p, SystemId::CoELndt)?;
    let mut n = Negation::new(p.axioms.clone());
    let root = n.dualize_into(p)?;
    Ok(finish(&n.builder, root, SystemId::ELndt, format!("lem=dualize from={}", p.len())))
}

/// An eLNDT proof of the same DT sequent as a co-eLNDT proof.
pub fn coelndt_to_elndt(p: &Proof) -> Result<GeneratedProof> {
    input_check(p, SystemId::CoELndt)?;
    let concl = p.conclusion().ok_or_else(|| ConstructionError::Other("empty proof".into()))?.clone();
    for q in concl.queries() {
        let dt = match q.as_base() {
            Some(f) => classify(f, &p.axioms)?.is_dt(),
            None => false,
        };
        if !dt {
            return Err(ConstructionError::Class(format!("{q} in the conclusion is not DT")));
        }
    }
    let mut n = Negation::new(p.axioms.clone());
    let mut cl = vec![n.dualize_into(p)?];
    for q in concl.queries() {
        cl.extend(n.excluded_middle(q.as_base().expect("checked"))?);
    }
    let root = n.builder.derive(&concl, &cl)?;
    Ok(finish(&n.builder, root, SystemId::ELndt, format!("prop=coelndt_to_elndt from={}", p.len())))
}
