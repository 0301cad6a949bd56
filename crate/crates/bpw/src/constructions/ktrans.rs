use std::collections::{HashMap, HashSet};

use super::{excess, finish, input_check, ConstructionError, DeciderStore, GeneratedProof, Negation, PosAxiomStore, Result, ThresholdStore};
use crate::calculus::{Proof, ProofBuilder, SystemId};
use crate::syntax::class::classify_memo;
use crate::syntax::{ExtAxiomSet, ExtVar, Formula, FormulaClass, Node, Query, Sequent, Sort};

/// Everything the `k`-translation of one eL∃∀DT proof needs: the list
/// `U⃗` of its co-eNDT formulas that are not eDT, their negations, the
/// thresholds over `Ū⃗` and the deciders `U_i^k = dec_k(1, Ū_i, 0)`.
pub struct KContext {
    pub thr: ThresholdStore,
    neg: Negation,
    us: Vec<Formula>,
    bars: Vec<Formula>,
    index: HashMap<Formula, usize>,
    classes: HashMap<Formula, FormulaClass>,
    memo: HashMap<(Formula, i64), Formula>,
}

fn kx_var(v: ExtVar, k: i64) -> ExtVar {
    ExtVar::gen(Sort::E, "kx", vec![Formula::ext(v)], vec![k])
}

impl KContext {
    /// Collects `U⃗` from the lines of `p` and the definitions they reach.
    pub fn new(p: &Proof) -> Result<KContext> {
        let mut classes = HashMap::new();
        let mut us = Vec::new();
        let mut seen = HashSet::new();
        for l in &p.lines {
            for q in l.seq.queries() {
                let f = q.as_base().ok_or_else(|| ConstructionError::Class(format!("query {q} in an eL∃∀DT proof")))?;
                collect_u(f, &p.axioms, &mut classes, &mut seen, &mut us)?;
            }
        }
        let mut neg = Negation::new(p.axioms.clone());
        let bars = us.iter().map(|&u| neg.negate(u)).collect::<Result<Vec<_>>>()?;
        let builder = std::mem::take(&mut neg.builder);
        let thr = ThresholdStore::with_pos(bars.clone(), PosAxiomStore::from_builder(builder));
        let index = us.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        Ok(KContext { thr, neg, us, bars, index, classes, memo: HashMap::new() })
    }

    pub fn n(&self) -> usize {
        self.us.len()
    }

    pub fn us(&self) -> &[Formula] {
        &self.us
    }

    pub fn bars(&self) -> &[Formula] {
        &self.bars
    }

    pub fn axioms(&self) -> &ExtAxiomSet {
        self.thr.axioms()
    }

    pub fn builder(&mut self) -> &mut ProofBuilder {
        &mut self.thr.pos.builder
    }

    fn class(&mut self, f: Formula) -> Result<FormulaClass> {
        Ok(classify_memo(f, &self.thr.pos.builder.axioms, &mut self.classes)?)
    }

    /// Co-eNDT but not eDT: moved across as its negation.
    fn is_u(&mut self, f: Formula) -> Result<bool> {
        let c = self.class(f)?;
        Ok(c.is_coendt() && !c.is_edt())
    }

    fn with_neg<R>(&mut self, f: impl FnOnce(&mut Negation) -> Result<R>) -> Result<R> {
        std::mem::swap(&mut self.neg.builder, &mut self.thr.pos.builder);
        let r = f(&mut self.neg);
        std::mem::swap(&mut self.neg.builder, &mut self.thr.pos.builder);
        r
    }

    fn with_decider<R>(&mut self, i: usize, k: i64, f: impl FnOnce(&mut DeciderStore) -> Result<R>) -> Result<R> {
        if i >= self.n() {
            return Err(ConstructionError::Range(format!("i = {i} must be below N = {}", self.n())));
        }
        let thr = std::mem::replace(&mut self.thr, ThresholdStore::new(vec![], ExtAxiomSet::new()));
        let mut d = DeciderStore::new(thr, i, k, Formula::one(), Formula::zero())?;
        let r = f(&mut d);
        self.thr = d.thr;
        r
    }

    pub fn thr(&mut self, k: i64) -> Result<Formula> {
        self.thr.thr(0, k)
    }

    /// `U_i^k`.
    pub fn decider(&mut self, i: usize, k: i64) -> Result<Formula> {
        self.with_decider(i, k, |d| d.entry())
    }

    /// `X^k`: homomorphic on decisions and `∨`, `x ↦ e^k`, `U_i ↦ U_i^k`,
    /// identity on eDT formulas.
    pub fn translate(&mut self, f: Formula, k: i64) -> Result<Formula> {
        if let Some(&g) = self.memo.get(&(f, k)) {
            return Ok(g);
        }
        let c = self.class(f)?;
        let g = if c.is_edt() {
            f
        } else if c.is_coendt() {
            let i = *self
                .index
                .get(&f)
                .ok_or_else(|| ConstructionError::Other(format!("co-eNDT formula {f} is not in the fixed list")))?;
            self.decider(i, k)?
        } else {
            match f.node() {
                Node::Dec(a, p, b) => Formula::dec(self.translate(a, k)?, p, self.translate(b, k)?),
                Node::Or(a, b) => Formula::or(self.translate(a, k)?, self.translate(b, k)?),
                Node::Ext(v) => {
                    let w = kx_var(v, k);
                    if !self.axioms().contains(w) {
                        let d = self.axioms().def(v).ok_or_else(|| ConstructionError::Class(format!("{v} is undefined")))?;
                        let dk = self.translate(d, k)?;
                        self.builder().axioms.ensure(w, dk)?;
                    }
                    Formula::ext(w)
                }
                _ => return Err(ConstructionError::Class(format!("{f} is not e∃∀DT"))),
            }
        };
        self.memo.insert((f, k), g);
        Ok(g)
    }

    fn negate(&mut self, f: Formula) -> Result<Formula> {
        self.with_neg(|n| n.negate(f))
    }

    /// `Thr_k, Γ^k, Ū(Δ) |- Δ^k, Ū(Γ), Thr_{k+1}`.
    pub fn translate_sequent(&mut self, s: &Sequent, k: i64) -> Result<Sequent> {
        let mut out = Sequent::new(vec![Query::base(self.thr(k)?)], vec![Query::base(self.thr(k + 1)?)]);
        for (left, qs) in [(true, &s.ante), (false, &s.succ)] {
            for &q in qs {
                let f = q.as_base().ok_or_else(|| ConstructionError::Class(format!("query {q} in an eL∃∀DT proof")))?;
                if self.is_u(f)? {
                    let g = Query::base(self.negate(f)?);
                    if left { out.succ.push(g) } else { out.ante.push(g) }
                } else {
                    let g = Query::base(self.translate(f, k)?);
                    if left { out.ante.push(g) } else { out.succ.push(g) }
                }
            }
        }
        Ok(out)
    }

    /// `Thr_k, Ū_i, U_i^k |- Thr_{k+1}` and `Thr_k |- Ū_i, U_i^k, Thr_{k+1}`,
    /// cut out of the Immerman–Szelepcsényi sequents with `A = 1`, `C = 0`.
    pub fn corollary(&mut self, i: usize, k: i64) -> Result<[usize; 2]> {
        let (t0, t1) = (self.thr(k)?, self.thr(k + 1)?);
        let (ub, uk) = (self.bars[i], self.decider(i, k)?);
        let targets = [Sequent::of(&[t0, ub, uk], &[t1]), Sequent::of(&[t0], &[ub, uk, t1])];
        if let [Some(a), Some(b)] = targets.each_ref().map(|t| self.thr.pos.builder.lookup(t)) {
            return Ok([a, b]);
        }
        let imm = self.with_decider(i, k, |d| d.immszel_lines())?;
        let b = self.builder();
        let (z, o) = (b.zero_l(), b.one_r());
        Ok([b.derive(&targets[0], &[imm[2], z])?, b.derive(&targets[1], &[imm[1], o])?])
    }

    /// Definitional clauses of a formula's top connective.
    fn shape(&mut self, f: Formula) -> Result<Vec<usize>> {
        Ok(self.builder().defs(Query::base(f))?)
    }

    /// Clause lines justifying one translated step whose principal and
    /// auxiliary formulas are `involved`.
    fn step_clauses(&mut self, involved: &[Formula], k: i64) -> Result<Vec<usize>> {
        let mut cl = Vec::new();
        for &f in involved {
            if self.is_u(f)? {
                let nf = self.negate(f)?;
                cl.extend(self.shape(nf)?);
                let kids = match f.node() {
                    Node::Dec(a, _, b) | Node::And(a, b) => vec![a, b],
                    Node::Ext(v) => self.axioms().def(v).into_iter().collect(),
                    _ => vec![],
                };
                for c in kids {
                    if self.class(c)?.is_edt() {
                        cl.extend(self.with_neg(|n| n.excluded_middle(c))?);
                    }
                }
            } else {
                let fk = self.translate(f, k)?;
                cl.extend(self.shape(fk)?);
                let kids = match f.node() {
                    Node::Dec(a, _, b) | Node::Or(a, b) => vec![a, b],
                    Node::Ext(v) => self.axioms().def(v).into_iter().collect(),
                    _ => vec![],
                };
                for c in kids {
                    if self.is_u(c)? {
                        let i = self.index[&c];
                        cl.extend(self.corollary(i, k)?);
                    }
                }
            }
        }
        Ok(cl)
    }

    /// Translates every line of `p`; returns the line of the translated
    /// conclusion `Thr_k, Σ |- Π, Thr_{k+1}`.
    pub fn prove_k(&mut self, p: &Proof, k: i64) -> Result<usize> {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let by_id: HashMap<usize, &crate::calculus::ProofLine> = p.lines.iter().map(|m| (m.id, m)).collect();
        let mut root = 0;
        for l in &p.lines {
            let prem: Vec<usize> = l.prem.iter().map(|q| map[q]).collect();
            let target = self.translate_sequent(&l.seq, k)?;
            let mut involved: Vec<Query> = Vec::new();
            for &pi in &l.prem {
                let ps = &by_id[&pi].seq;
                involved.extend(excess(&l.seq.ante, &ps.ante));
                involved.extend(excess(&l.seq.succ, &ps.succ));
                involved.extend(excess(&ps.ante, &l.seq.ante));
                involved.extend(excess(&ps.succ, &l.seq.succ));
            }
            if l.prem.is_empty() {
                involved.extend(l.seq.queries());
            }
            let mut fs: Vec<Formula> = involved.iter().filter_map(|q| q.as_base()).collect();
            fs.sort();
            fs.dedup();
            let mut cl = prem;
            cl.extend(self.step_clauses(&fs, k)?);
            root = self.builder().derive(&target, &cl)?;
            map.insert(l.id, root);
        }
        Ok(root)
    }
}

fn collect_u(
    f: Formula,
    e: &ExtAxiomSet,
    classes: &mut HashMap<Formula, FormulaClass>,
    seen: &mut HashSet<Formula>,
    us: &mut Vec<Formula>,
) -> Result<()> {
    if !seen.insert(f) {
        return Ok(());
    }
    let c = classify_memo(f, e, classes)?;
    if c.is_edt() {
        return Ok(());
    }
    if c.is_coendt() {
        us.push(f);
        return Ok(());
    }
    match f.node() {
        Node::Dec(a, _, b) | Node::Or(a, b) | Node::And(a, b) => {
            collect_u(a, e, classes, seen, us)?;
            collect_u(b, e, classes, seen, us)
        }
        Node::Ext(v) => match e.def(v) {
            Some(d) => collect_u(d, e, classes, seen, us),
            None => Err(ConstructionError::Class(format!("{v} is undefined"))),
        },
        _ => Ok(()),
    }
}

fn need_ndt_conclusion(p: &Proof) -> Result<Sequent> {
    input_check(p, SystemId::ELEaDt)?;
    let concl = p.conclusion().ok_or_else(|| ConstructionError::Other("empty proof".into()))?.clone();
    let mut classes = HashMap::new();
    for q in concl.queries() {
        let ok = match q.as_base() {
            Some(f) => classify_memo(f, &p.axioms, &mut classes)?.is_ndt(),
            None => false,
        };
        if !ok {
            return Err(ConstructionError::Class(format!("{q} in the conclusion is not NDT")));
        }
    }
    Ok(concl)
}

/// `X^k` inside a context built for the ambient proof.
pub fn k_translate(ctx: &mut KContext, x: Formula, k: i64) -> Result<Formula> {
    ctx.translate(x, k)
}

/// An eLNDT proof of `Thr(Ū⃗,k), Σ |- Π, Thr(Ū⃗,k+1)` from an eL∃∀DT proof
/// of the NDT sequent `Σ |- Π`.
pub fn prove_k_sequent(p: &Proof, k: i64) -> Result<GeneratedProof> {
    need_ndt_conclusion(p)?;
    let mut ctx = KContext::new(p)?;
    let root = ctx.prove_k(p, k)?;
    Ok(finish(&ctx.thr.pos.builder, root, SystemId::ELndt, format!("lem=k_sequent k={k} n={}", ctx.n())))
}

/// An eLNDT proof of the same NDT sequent: the `k`-sequents for
/// `k = 0..N` chained between `|- Thr_0` and `Thr_{N+1} |-`.
pub fn collapse_eafdt(p: &Proof) -> Result<GeneratedProof> {
    let concl = need_ndt_conclusion(p)?;
    let mut ctx = KContext::new(p)?;
    let n = ctx.n();
    let mut cl = Vec::with_capacity(n + 3);
    for k in 0..=n as i64 {
        cl.push(ctx.prove_k(p, k)?);
    }
    cl.push(ctx.thr.mono_zero(0, 0)?);
    cl.push(ctx.thr.mono_big(0, n as i64 + 1)?);
    let root = ctx.builder().derive(&concl, &cl)?;
    Ok(finish(&ctx.thr.pos.builder, root, SystemId::ELndt, format!("thm=collapse_eafdt n={n} from={}", p.len())))
}
