use std::collections::HashMap;

use super::{excess, finish, input_check, sq, ConstructionError, GeneratedProof, Result};
use crate::calculus::{Aux, Proof, ProofBuilder, Rule, SystemId};
use crate::syntax::{ExtAxiomSet, ExtVar, Formula, Node, QNode, Query, Sequent, Sort};

/// Compiles Boolean combinations of eDT formulas into single eDT
/// extension variables.
///
/// `not(F)`, `and(F,G)` and `or(F,G)` are defined by recursion on `F`, so
/// every new definition is a decision tree over earlier variables.
pub struct BoolCompiler {
    pub builder: ProofBuilder,
    memo: HashMap<Query, Formula>,
}

fn not_var(f: Formula) -> ExtVar {
    ExtVar::gen(Sort::E, "not", vec![f], vec![])
}

fn and_var(f: Formula, g: Formula) -> ExtVar {
    ExtVar::gen(Sort::E, "and", vec![f, g], vec![])
}

fn or_var(f: Formula, g: Formula) -> ExtVar {
    ExtVar::gen(Sort::E, "or", vec![f, g], vec![])
}

impl BoolCompiler {
    pub fn new(base: ExtAxiomSet) -> BoolCompiler {
        BoolCompiler { builder: ProofBuilder::new(base), memo: HashMap::new() }
    }

    pub fn axioms(&self) -> &ExtAxiomSet {
        &self.builder.axioms
    }

    fn def(&self, v: ExtVar) -> Result<Formula> {
        self.builder.axioms.def(v).ok_or_else(|| ConstructionError::Class(format!("{v} is undefined")))
    }

    fn need_edt(f: Formula) -> ConstructionError {
        ConstructionError::Class(format!("{f} is not eDT"))
    }

    pub fn not(&mut self, f: Formula) -> Result<Formula> {
        let v = not_var(f);
        if !self.builder.axioms.contains(v) {
            let d = match f.node() {
                Node::Zero => Formula::one(),
                Node::One => Formula::zero(),
                Node::Var(p) => Formula::dec(Formula::one(), p, Formula::zero()),
                Node::Dec(a, p, b) => Formula::dec(self.not(a)?, p, self.not(b)?),
                Node::Ext(w) => {
                    let e = self.def(w)?;
                    self.not(e)?
                }
                Node::Or(..) | Node::And(..) => return Err(Self::need_edt(f)),
            };
            self.builder.axioms.ensure(v, d)?;
        }
        Ok(Formula::ext(v))
    }

    pub fn and(&mut self, f: Formula, g: Formula) -> Result<Formula> {
        let v = and_var(f, g);
        if !self.builder.axioms.contains(v) {
            let d = match f.node() {
                Node::Zero => Formula::zero(),
                Node::One => g,
                Node::Var(p) => Formula::dec(Formula::zero(), p, g),
                Node::Dec(a, p, b) => Formula::dec(self.and(a, g)?, p, self.and(b, g)?),
                Node::Ext(w) => {
                    let e = self.def(w)?;
                    self.and(e, g)?
                }
                Node::Or(..) | Node::And(..) => return Err(Self::need_edt(f)),
            };
            self.builder.axioms.ensure(v, d)?;
        }
        Ok(Formula::ext(v))
    }

    pub fn or(&mut self, f: Formula, g: Formula) -> Result<Formula> {
        let v = or_var(f, g);
        if !self.builder.axioms.contains(v) {
            let d = match f.node() {
                Node::Zero => g,
                Node::One => Formula::one(),
                Node::Var(p) => Formula::dec(g, p, Formula::one()),
                Node::Dec(a, p, b) => Formula::dec(self.or(a, g)?, p, self.or(b, g)?),
                Node::Ext(w) => {
                    let e = self.def(w)?;
                    self.or(e, g)?
                }
                Node::Or(..) | Node::And(..) => return Err(Self::need_edt(f)),
            };
            self.builder.axioms.ensure(v, d)?;
        }
        Ok(Formula::ext(v))
    }

    /// The eDT formula standing for a Boolean query.
    pub fn compile(&mut self, q: Query) -> Result<Formula> {
        if let Some(&f) = self.memo.get(&q) {
            return Ok(f);
        }
        let f = match q.node() {
            QNode::Base(f) => f,
            QNode::Not(a) => {
                let a = self.compile(a)?;
                self.not(a)?
            }
            QNode::And(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                self.and(a, b)?
            }
            QNode::Or(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                self.or(a, b)?
            }
        };
        self.memo.insert(q, f);
        Ok(f)
    }

    fn compile_seq(&mut self, s: &Sequent) -> Result<Sequent> {
        let ante = s.ante.iter().map(|&q| self.compile(q).map(Query::base)).collect::<Result<Vec<_>>>()?;
        let succ = s.succ.iter().map(|&q| self.compile(q).map(Query::base)).collect::<Result<Vec<_>>>()?;
        Ok(Sequent::new(ante, succ))
    }

    fn shape_clauses(&mut self, d: Formula) -> Vec<usize> {
        match d.node() {
            Node::Dec(..) => self.builder.dec_clauses(d).to_vec(),
            Node::Zero => vec![self.builder.zero_l()],
            Node::One => vec![self.builder.one_r()],
            _ => vec![],
        }
    }

    /// `N, F |-` and `|- N, F` for `N = not(F)`.
    pub fn not_lemmas(&mut self, f: Formula) -> Result<[usize; 2]> {
        let n = self.not(f)?;
        let targets = [sq(&[n, f], &[]), sq(&[], &[n, f])];
        if let [Some(x), Some(y)] = targets.each_ref().map(|t| self.builder.lookup(t)) {
            return Ok([x, y]);
        }
        let v = n.as_ext().expect("variable");
        let d = self.def(v)?;
        let mut cl = self.builder.ext_clauses(v)?.to_vec();
        cl.extend(self.shape_clauses(d));
        cl.push(self.builder.zero_l());
        cl.push(self.builder.one_r());
        match f.node() {
            Node::Dec(a, _, b) => {
                cl.extend(self.builder.dec_clauses(f));
                cl.extend(self.not_lemmas(a)?);
                cl.extend(self.not_lemmas(b)?);
            }
            Node::Ext(w) => {
                cl.extend(self.builder.ext_clauses(w)?);
                let e = self.def(w)?;
                cl.extend(self.not_lemmas(e)?);
            }
            _ => {}
        }
        Ok([self.builder.derive(&targets[0], &cl)?, self.builder.derive(&targets[1], &cl)?])
    }

    /// `X |- F`, `X |- G` and `F, G |- X` for `X = and(F,G)`.
    pub fn and_lemmas(&mut self, f: Formula, g: Formula) -> Result<[usize; 3]> {
        let x = self.and(f, g)?;
        let targets = [sq(&[x], &[f]), sq(&[x], &[g]), sq(&[f, g], &[x])];
        self.binary_lemmas(x, f, g, targets, Self::and_lemmas)
    }

    /// `Y |- F, G`, `F |- Y` and `G |- Y` for `Y = or(F,G)`.
    pub fn or_lemmas(&mut self, f: Formula, g: Formula) -> Result<[usize; 3]> {
        let y = self.or(f, g)?;
        let targets = [sq(&[y], &[f, g]), sq(&[f], &[y]), sq(&[g], &[y])];
        self.binary_lemmas(y, f, g, targets, Self::or_lemmas)
    }

    fn binary_lemmas(
        &mut self,
        x: Formula,
        f: Formula,
        g: Formula,
        targets: [Sequent; 3],
        rec: fn(&mut Self, Formula, Formula) -> Result<[usize; 3]>,
    ) -> Result<[usize; 3]> {
        if let [Some(a), Some(b), Some(c)] = targets.each_ref().map(|t| self.builder.lookup(t)) {
            return Ok([a, b, c]);
        }
        let v = x.as_ext().expect("variable");
        let d = self.def(v)?;
        let mut cl = self.builder.ext_clauses(v)?.to_vec();
        cl.extend(self.shape_clauses(d));
        cl.push(self.builder.zero_l());
        cl.push(self.builder.one_r());
        match f.node() {
            Node::Dec(a, _, b) => {
                cl.extend(self.builder.dec_clauses(f));
                cl.extend(rec(self, a, g)?);
                cl.extend(rec(self, b, g)?);
            }
            Node::Ext(w) => {
                cl.extend(self.builder.ext_clauses(w)?);
                let e = self.def(w)?;
                cl.extend(rec(self, e, g)?);
            }
            _ => {}
        }
        let mut out = [0; 3];
        for (o, t) in out.iter_mut().zip(&targets) {
            *o = self.builder.derive(t, &cl)?;
        }
        Ok(out)
    }

    /// Lemma lines describing the compiled form of a compound query.
    fn connective_lemmas(&mut self, q: Query) -> Result<Vec<usize>> {
        Ok(match q.node() {
            QNode::Base(_) => vec![],
            QNode::Not(a) => {
                let a = self.compile(a)?;
                self.not_lemmas(a)?.to_vec()
            }
            QNode::And(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                self.and_lemmas(a, b)?.to_vec()
            }
            QNode::Or(a, b) => {
                let (a, b) = (self.compile(a)?, self.compile(b)?);
                self.or_lemmas(a, b)?.to_vec()
            }
        })
    }
}

/// Turns an LK(eLDT) proof into an eLDT proof over a larger axiom set.
/// Base conclusions are kept; Boolean queries in the conclusion are
/// replaced by their compiled formulas.
pub fn eliminate_bool_lk_eldt(p: &Proof) -> Result<GeneratedProof> {
    input_check(p, SystemId::LkELdt)?;
    if p.is_empty() {
        return Err(ConstructionError::Other("empty proof".into()));
    }
    let mut bc = BoolCompiler::new(p.axioms.clone());
    let mut map: HashMap<usize, usize> = HashMap::new();
    let by_id: HashMap<usize, &crate::calculus::ProofLine> = p.lines.iter().map(|m| (m.id, m)).collect();
    let mut root = 0;
    for l in &p.lines {
        let prem: Vec<usize> = l.prem.iter().map(|q| map[q]).collect();
        let target = bc.compile_seq(&l.seq)?;
        root = match l.rule {
            Rule::NotL | Rule::NotR | Rule::AndL | Rule::AndR | Rule::OrL | Rule::OrR => {
                let first = &by_id[&l.prem[0]].seq;
                // not-l and not-r move the body across, so look at both sides.
                let mut principal = excess(&l.seq.ante, &first.ante);
                principal.extend(excess(&l.seq.succ, &first.succ));
                principal.sort();
                principal.dedup();
                let mut cl = prem.clone();
                for q in principal {
                    cl.extend(bc.connective_lemmas(q)?);
                }
                bc.builder.derive(&target, &cl)?
            }
            _ => bc.builder.push(&target, l.rule, Aux { pos: None, ..l.aux.clone() }, prem),
        };
        map.insert(l.id, root);
    }
    Ok(finish(&bc.builder, root, SystemId::ELdt, format!("thm=bool_elim from={}", p.len())))
}
