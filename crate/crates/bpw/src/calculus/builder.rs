use std::collections::HashMap;

use super::check::ms_minus;
use super::{restrict, Aux, Dir, Proof, ProofLine, Rule};
use crate::syntax::{ExtAxiomSet, ExtVar, Formula, Node, QNode, Query, Sequent};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DeriveError {
    #[error("{0} does not follow from the supplied clauses")]
    NotEntailed(String),
    #[error("search budget exhausted deriving {0}")]
    Budget(String),
    #[error("cannot adapt {from} to {to}")]
    Adapt { from: String, to: String },
    #[error("undefined extension variable {0}")]
    Undefined(String),
    #[error("{0}")]
    Other(String),
}

/// Incremental multiset-mode proof construction with line sharing.
///
/// Every line is stored with sorted cedents and each sequent is proved at
/// most once, so repeated sub-derivations collapse into a DAG.
#[derive(Default)]
pub struct ProofBuilder {
    lines: Vec<ProofLine>,
    proved: HashMap<Sequent, usize>,
    pub axioms: ExtAxiomSet,
    /// Node budget per [`derive`](Self::derive) call.
    pub budget: usize,
}

const DEFAULT_BUDGET: usize = 200_000;

type Clause = (Vec<Query>, Vec<Query>, usize);

impl ProofBuilder {
    pub fn new(axioms: ExtAxiomSet) -> ProofBuilder {
        ProofBuilder { axioms, budget: DEFAULT_BUDGET, ..ProofBuilder::default() }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn seq(&self, i: usize) -> &Sequent {
        &self.lines[i].seq
    }

    pub fn lines(&self) -> &[ProofLine] {
        &self.lines
    }

    /// Line proving exactly `s` (as multisets), if any.
    pub fn lookup(&self, s: &Sequent) -> Option<usize> {
        self.proved.get(&s.normalized()).copied()
    }

    /// Adds a line unless its sequent is already proved.
    pub fn push(&mut self, seq: &Sequent, rule: Rule, aux: Aux, prem: Vec<usize>) -> usize {
        let seq = seq.normalized();
        if let Some(&i) = self.proved.get(&seq) {
            return i;
        }
        debug_assert!(prem.iter().all(|&p| p < self.lines.len()));
        let i = self.lines.len();
        self.lines.push(ProofLine { id: i, seq: seq.clone(), rule, prem, aux });
        self.proved.insert(seq, i);
        i
    }

    /// Imports all lines of `p` and returns the line of its conclusion.
    pub fn import(&mut self, p: &Proof) -> usize {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut last = 0;
        for l in &p.lines {
            let prem = l.prem.iter().map(|q| map[q]).collect();
            last = self.push(&l.seq, l.rule, l.aux.clone(), prem);
            map.insert(l.id, last);
        }
        last
    }

    pub fn finish(&self, root: usize) -> Proof {
        restrict(&self.lines, root, self.axioms.clone())
    }

    // -- axioms and trivial sequents ------------------------------------

    pub fn id(&mut self, q: Query) -> usize {
        self.push(&Sequent::new(vec![q], vec![q]), Rule::Id, Aux::none(), vec![])
    }

    pub fn zero_l(&mut self) -> usize {
        self.push(&Sequent::of(&[Formula::zero()], &[]), Rule::ZeroL, Aux::none(), vec![])
    }

    pub fn one_r(&mut self) -> usize {
        self.push(&Sequent::of(&[], &[Formula::one()]), Rule::OneR, Aux::none(), vec![])
    }

    fn def_of(&self, v: ExtVar) -> Result<Formula, DeriveError> {
        self.axioms.def(v).ok_or_else(|| DeriveError::Undefined(v.to_string()))
    }

    /// `e |- E`.
    pub fn ext_lr(&mut self, v: ExtVar) -> Result<usize, DeriveError> {
        let d = self.def_of(v)?;
        Ok(self.push(&Sequent::of(&[Formula::ext(v)], &[d]), Rule::Ext, Aux::ext(v, Dir::Lr), vec![]))
    }

    /// `E |- e`.
    pub fn ext_rl(&mut self, v: ExtVar) -> Result<usize, DeriveError> {
        let d = self.def_of(v)?;
        Ok(self.push(&Sequent::of(&[d], &[Formula::ext(v)]), Rule::Ext, Aux::ext(v, Dir::Rl), vec![]))
    }

    /// Proves `s` from an identity or a constant axiom plus structural steps.
    pub fn trivial(&mut self, s: &Sequent) -> Option<usize> {
        if let Some(i) = self.lookup(s) {
            return Some(i);
        }
        let common = s.ante.iter().find(|q| s.succ.contains(q)).copied();
        let base = if let Some(q) = common {
            self.id(q)
        } else if s.ante.contains(&Query::base(Formula::zero())) {
            self.zero_l()
        } else if s.succ.contains(&Query::base(Formula::one())) {
            self.one_r()
        } else {
            return None;
        };
        self.adapt(base, s).ok()
    }

    /// Applies `rule` to premises that are each [`trivial`](Self::trivial).
    pub fn apply(&mut self, concl: &Sequent, rule: Rule, aux: Aux, prems: &[Sequent]) -> usize {
        if let Some(i) = self.lookup(concl) {
            return i;
        }
        let ids = prems
            .iter()
            .map(|p| self.trivial(p).unwrap_or_else(|| panic!("premise {p} is not trivial")))
            .collect();
        self.push(concl, rule, aux, ids)
    }

    /// Contractions and weakenings taking line `i` to `target`.
    pub fn adapt(&mut self, i: usize, target: &Sequent) -> Result<usize, DeriveError> {
        let t = target.normalized();
        let mut cur = self.lines[i].seq.clone();
        if cur == t {
            return Ok(i);
        }
        if let Some(j) = self.lookup(&t) {
            return Ok(j);
        }
        let from = cur.to_string();
        let bad = || DeriveError::Adapt { from: from.clone(), to: t.to_string() };
        let mut at = i;
        for left in [true, false] {
            let (have, want) = if left { (cur.ante.clone(), t.ante.clone()) } else { (cur.succ.clone(), t.succ.clone()) };
            let mut keys = have.clone();
            keys.extend_from_slice(&want);
            keys.sort();
            keys.dedup();
            for q in keys {
                let h = have.iter().filter(|&&x| x == q).count();
                let w = want.iter().filter(|&&x| x == q).count();
                if w == 0 && h > 0 {
                    return Err(bad());
                }
                for _ in w..h {
                    let side = if left { &mut cur.ante } else { &mut cur.succ };
                    let k = side.iter().position(|&x| x == q).expect("present");
                    side.remove(k);
                    at = self.push(&cur, if left { Rule::CL } else { Rule::CR }, Aux::none(), vec![at]);
                }
                for _ in h..w {
                    let side = if left { &mut cur.ante } else { &mut cur.succ };
                    side.push(q);
                    side.sort();
                    at = self.push(&cur, if left { Rule::WL } else { Rule::WR }, Aux::none(), vec![at]);
                }
            }
        }
        Ok(at)
    }

    /// `Γ |- Δ` from `Γ |- Δ, q` (line `a`) and `Γ, q |- Δ` (line `b`),
    /// weakening both to the union of their contexts first.
    pub fn cut(&mut self, a: usize, b: usize, q: Query) -> Result<usize, DeriveError> {
        let sa = self.lines[a].seq.clone();
        let sb = self.lines[b].seq.clone();
        let ra = ms_minus(&sa.succ, &[q]).ok_or_else(|| DeriveError::Other(format!("{q} missing in {sa}")))?;
        let rb = ms_minus(&sb.ante, &[q]).ok_or_else(|| DeriveError::Other(format!("{q} missing in {sb}")))?;
        let gamma = union(&sa.ante, &rb);
        let delta = union(&ra, &sb.succ);
        let mut pa = Sequent::new(gamma.clone(), delta.clone());
        pa.succ.push(q);
        let mut pb = Sequent::new(gamma.clone(), delta.clone());
        pb.ante.push(q);
        let ia = self.adapt(a, &pa)?;
        let ib = self.adapt(b, &pb)?;
        Ok(self.push(&Sequent::new(gamma, delta), Rule::Cut, Aux::none(), vec![ia, ib]))
    }

    // -- definitional clauses -------------------------------------------

    /// For `D = dec(A,p,B)`: `D |- A,p`, `D,p |- B`, `A |- D,p`, `p,B |- D`.
    pub fn dec_clauses(&mut self, f: Formula) -> [usize; 4] {
        let Node::Dec(a, p, b) = f.node() else { panic!("dec_clauses on {f}") };
        let (d, a, b, p) = (Query::base(f), Query::base(a), Query::base(b), Query::base(Formula::var(p)));
        let s = |x: &[Query], y: &[Query]| Sequent::new(x.to_vec(), y.to_vec());
        let l = Rule::DecL;
        let r = Rule::DecR;
        [
            self.apply(&s(&[d], &[a, p]), l, Aux::none(), &[s(&[a], &[a, p, p]), s(&[p, b], &[a, p])]),
            self.apply(&s(&[d, p], &[b]), l, Aux::none(), &[s(&[p, a], &[b, p]), s(&[p, p, b], &[b])]),
            self.apply(&s(&[a], &[d, p]), r, Aux::none(), &[s(&[a], &[p, a, p]), s(&[a, p], &[p, b])]),
            self.apply(&s(&[p, b], &[d]), r, Aux::none(), &[s(&[p, b], &[a, p]), s(&[p, b, p], &[b])]),
        ]
    }

    /// For `D = A ∨ B` at either tier: `D |- A,B`, `A |- D`, `B |- D`.
    pub fn or_clauses(&mut self, d: Query) -> [usize; 3] {
        let (a, b) = d.split_or().unwrap_or_else(|| panic!("or_clauses on {d}"));
        let s = |x: &[Query], y: &[Query]| Sequent::new(x.to_vec(), y.to_vec());
        [
            self.apply(&s(&[d], &[a, b]), Rule::OrL, Aux::none(), &[s(&[a], &[a, b]), s(&[b], &[a, b])]),
            self.apply(&s(&[a], &[d]), Rule::OrR, Aux::none(), &[s(&[a], &[a, b])]),
            self.apply(&s(&[b], &[d]), Rule::OrR, Aux::none(), &[s(&[b], &[a, b])]),
        ]
    }

    /// For `D = A ∧ B` at either tier: `D |- A`, `D |- B`, `A,B |- D`.
    pub fn and_clauses(&mut self, d: Query) -> [usize; 3] {
        let (a, b) = d.split_and().unwrap_or_else(|| panic!("and_clauses on {d}"));
        let s = |x: &[Query], y: &[Query]| Sequent::new(x.to_vec(), y.to_vec());
        [
            self.apply(&s(&[d], &[a]), Rule::AndL, Aux::none(), &[s(&[a, b], &[a])]),
            self.apply(&s(&[d], &[b]), Rule::AndL, Aux::none(), &[s(&[a, b], &[b])]),
            self.apply(&s(&[a, b], &[d]), Rule::AndR, Aux::none(), &[s(&[a, b], &[a]), s(&[a, b], &[b])]),
        ]
    }

    /// For `N = ¬Q`: `Q, N |-` and `|- Q, N`.
    pub fn not_clauses(&mut self, n: Query) -> [usize; 2] {
        let QNode::Not(q) = n.node() else { panic!("not_clauses on {n}") };
        let s = |x: &[Query], y: &[Query]| Sequent::new(x.to_vec(), y.to_vec());
        [
            self.apply(&s(&[q, n], &[]), Rule::NotL, Aux::none(), &[s(&[q], &[q])]),
            self.apply(&s(&[], &[q, n]), Rule::NotR, Aux::none(), &[s(&[q], &[q])]),
        ]
    }

    /// Both directions of the axiom of `v`.
    pub fn ext_clauses(&mut self, v: ExtVar) -> Result<[usize; 2], DeriveError> {
        Ok([self.ext_lr(v)?, self.ext_rl(v)?])
    }

    /// Clauses describing the top connective of `q`.
    pub fn defs(&mut self, q: Query) -> Result<Vec<usize>, DeriveError> {
        Ok(match q.node() {
            QNode::Base(f) => match f.node() {
                Node::Zero => vec![self.zero_l()],
                Node::One => vec![self.one_r()],
                Node::Var(_) => vec![],
                Node::Dec(..) => self.dec_clauses(f).to_vec(),
                Node::Or(..) => self.or_clauses(q).to_vec(),
                Node::And(..) => self.and_clauses(q).to_vec(),
                Node::Ext(v) => self.ext_clauses(v)?.to_vec(),
            },
            QNode::Not(_) => self.not_clauses(q).to_vec(),
            QNode::Or(..) => self.or_clauses(q).to_vec(),
            QNode::And(..) => self.and_clauses(q).to_vec(),
        })
    }

    /// Definitional clauses of `qs` and of their subformulas down to `depth`
    /// levels (extension variables count as one level).
    pub fn defs_deep(&mut self, qs: &[Query], depth: usize) -> Result<Vec<usize>, DeriveError> {
        let mut out = Vec::new();
        let mut frontier: Vec<Query> = qs.to_vec();
        let mut seen = std::collections::HashSet::new();
        for _ in 0..depth {
            let mut next = Vec::new();
            for q in frontier {
                if !seen.insert(q) {
                    continue;
                }
                out.extend(self.defs(q)?);
                next.extend(children(q, &self.axioms));
            }
            frontier = next;
        }
        Ok(out)
    }

    // -- resolution -----------------------------------------------------

    /// Proves `target` by cuts over the given clause lines, treating queries
    /// as atoms. Deterministic; fails iff the clauses do not entail the
    /// target propositionally.
    pub fn derive(&mut self, target: &Sequent, clauses: &[usize]) -> Result<usize, DeriveError> {
        if let Some(i) = self.lookup(target) {
            return Ok(i);
        }
        let t = target.as_sets();
        let mut cl: Vec<Clause> = Vec::with_capacity(clauses.len());
        for &c in clauses {
            let s = self.lines[c].seq.as_sets();
            cl.push((s.ante, s.succ, c));
        }
        let mut memo = HashMap::new();
        let mut budget = self.budget.max(1);
        match self.dpll(&t.ante, &t.succ, &cl, &mut memo, &mut budget) {
            Ok(Some(i)) => self.adapt(i, target),
            Ok(None) => Err(DeriveError::NotEntailed(target.to_string())),
            Err(()) => Err(DeriveError::Budget(target.to_string())),
        }
    }

    #[allow(clippy::type_complexity)]
    fn dpll(
        &mut self,
        a: &[Query],
        s: &[Query],
        cl: &[Clause],
        memo: &mut HashMap<(Vec<Query>, Vec<Query>), Option<usize>>,
        budget: &mut usize,
    ) -> Result<Option<usize>, ()> {
        if let Some(&r) = memo.get(&(a.to_vec(), s.to_vec())) {
            return Ok(r);
        }
        if *budget == 0 {
            return Err(());
        }
        *budget -= 1;
        let r = self.dpll_step(a, s, cl, memo, budget)?;
        memo.insert((a.to_vec(), s.to_vec()), r);
        Ok(r)
    }

    #[allow(clippy::type_complexity)]
    fn dpll_step(
        &mut self,
        a: &[Query],
        s: &[Query],
        cl: &[Clause],
        memo: &mut HashMap<(Vec<Query>, Vec<Query>), Option<usize>>,
        budget: &mut usize,
    ) -> Result<Option<usize>, ()> {
        if let Some(&q) = a.iter().find(|q| s.binary_search(q).is_ok()) {
            return Ok(Some(self.id(q)));
        }
        let inn = |v: &[Query], q: &Query| v.binary_search(q).is_ok();
        let mut best: Option<(usize, Query, bool)> = None;
        for (ca, cs, line) in cl {
            if ca.iter().any(|q| inn(s, q)) || cs.iter().any(|q| inn(a, q)) {
                continue;
            }
            let miss_a: Vec<Query> = ca.iter().filter(|q| !inn(a, q)).copied().collect();
            let miss_s: Vec<Query> = cs.iter().filter(|q| !inn(s, q)).copied().collect();
            let n = miss_a.len() + miss_s.len();
            if n == 0 {
                return Ok(Some(*line));
            }
            if best.as_ref().is_none_or(|b| n < b.0) {
                // Split so that this clause closes the first branch.
                let (q, first_true) = match miss_a.first() {
                    Some(&q) => (q, true),
                    None => (miss_s[0], false),
                };
                best = Some((n, q, first_true));
            }
        }
        let Some((_, q, first_true)) = best else { return Ok(None) };
        let with = |v: &[Query]| {
            let mut w = v.to_vec();
            let k = w.binary_search(&q).unwrap_err();
            w.insert(k, q);
            w
        };
        let (a_t, s_f) = (with(a), with(s));
        // Branch where q is true proves something with q on the left.
        let (r_t, r_f) = if first_true {
            let Some(rt) = self.dpll(&a_t, s, cl, memo, budget)? else { return Ok(None) };
            if !self.lines[rt].seq.ante.contains(&q) {
                return Ok(Some(rt));
            }
            let Some(rf) = self.dpll(a, &s_f, cl, memo, budget)? else { return Ok(None) };
            (rt, rf)
        } else {
            let Some(rf) = self.dpll(a, &s_f, cl, memo, budget)? else { return Ok(None) };
            if !self.lines[rf].seq.succ.contains(&q) {
                return Ok(Some(rf));
            }
            let Some(rt) = self.dpll(&a_t, s, cl, memo, budget)? else { return Ok(None) };
            (rt, rf)
        };
        if !self.lines[r_t].seq.ante.contains(&q) {
            return Ok(Some(r_t));
        }
        if !self.lines[r_f].seq.succ.contains(&q) {
            return Ok(Some(r_f));
        }
        // Collapse duplicate copies of q before cutting.
        let st = self.lines[r_t].seq.clone();
        let sf = self.lines[r_f].seq.clone();
        let mut t1 = st.clone();
        t1.ante.dedup();
        let mut t2 = sf.clone();
        t2.succ.dedup();
        let r_t = self.adapt(r_t, &t1).map_err(|_| ())?;
        let r_f = self.adapt(r_f, &t2).map_err(|_| ())?;
        Ok(Some(self.cut(r_f, r_t, q).map_err(|_| ())?))
    }
}

/// Set union of two sorted lists, each element once.
fn union(x: &[Query], y: &[Query]) -> Vec<Query> {
    let mut v: Vec<Query> = x.iter().chain(y).copied().collect();
    v.sort();
    v.dedup();
    v
}

/// Immediate components of a query, following one extension step.
pub(crate) fn children(q: Query, e: &ExtAxiomSet) -> Vec<Query> {
    match q.node() {
        QNode::Base(f) => match f.node() {
            Node::Dec(a, p, b) => vec![Query::base(a), Query::base(Formula::var(p)), Query::base(b)],
            Node::Or(a, b) | Node::And(a, b) => vec![Query::base(a), Query::base(b)],
            Node::Ext(v) => e.def(v).map(Query::base).into_iter().collect(),
            _ => vec![],
        },
        QNode::Not(a) => vec![a],
        QNode::Or(a, b) | QNode::And(a, b) => vec![a, b],
    }
}
