use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{GameError, System};
use crate::semantics::Simulator;
use crate::syntax::class::classify_memo;
use crate::syntax::{ExtAxiomSet, Formula, FormulaClass, Node, QNode, Query, Sequent};

/// The seven schemas of simple contradiction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Kind {
    BoolConst,
    Decision,
    ConnectiveNot,
    ConnectiveOr,
    ConnectiveAnd,
    Extension,
    Similarity,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::BoolConst,
        Kind::Decision,
        Kind::ConnectiveNot,
        Kind::ConnectiveOr,
        Kind::ConnectiveAnd,
        Kind::Extension,
        Kind::Similarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::BoolConst => "bool_const",
            Kind::Decision => "decision",
            Kind::ConnectiveNot => "connective_not",
            Kind::ConnectiveOr => "connective_or",
            Kind::ConnectiveAnd => "connective_and",
            Kind::Extension => "extension",
            Kind::Similarity => "similarity",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Kind, String> {
        Kind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown contradiction kind `{s}`"))
    }
}

/// A simple contradiction together with the assignments realizing it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Contradiction {
    pub kind: Kind,
    pub witness: Vec<(Query, bool)>,
}

impl Contradiction {
    fn new(kind: Kind, witness: Vec<(Query, bool)>) -> Contradiction {
        Contradiction { kind, witness }
    }
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.kind)?;
        for (i, (q, b)) in self.witness.iter().enumerate() {
            write!(f, "{}{q}↦{}", if i > 0 { ", " } else { "" }, *b as u8)?;
        }
        f.write_str("}")
    }
}

/// Outcome of [`GameState::assign`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Assigned {
    New,
    Same,
    /// The query already carries the other bit; the state is unchanged.
    Clash,
}

/// The answers given so far, in order.
#[derive(Clone, Default, Debug)]
pub struct GameState {
    map: HashMap<Query, bool>,
    order: Vec<Query>,
}

impl GameState {
    pub fn new() -> GameState {
        GameState::default()
    }

    /// The state `{Γ ↦ 1, Δ ↦ 0}`.
    pub fn of_sequent(s: &Sequent) -> (GameState, Option<Contradiction>) {
        let pairs: Vec<(Query, bool)> =
            s.ante.iter().map(|&q| (q, true)).chain(s.succ.iter().map(|&q| (q, false))).collect();
        GameState::from_pairs(&pairs)
    }

    /// Builds a state; a query given both bits is reported as a clash.
    pub fn from_pairs(pairs: &[(Query, bool)]) -> (GameState, Option<Contradiction>) {
        let mut st = GameState::new();
        let mut clash = None;
        for &(q, b) in pairs {
            if st.assign(q, b) == Assigned::Clash && clash.is_none() {
                clash = Some(opposite(q));
            }
        }
        (st, clash)
    }

    pub fn get(&self, q: Query) -> Option<bool> {
        self.map.get(&q).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Query, bool)> + '_ {
        self.order.iter().map(|&q| (q, self.map[&q]))
    }

    pub fn assign(&mut self, q: Query, b: bool) -> Assigned {
        match self.map.get(&q) {
            Some(&c) if c == b => Assigned::Same,
            Some(_) => Assigned::Clash,
            None => {
                self.map.insert(q, b);
                self.order.push(q);
                Assigned::New
            }
        }
    }

    /// Removes the most recent new assignment.
    pub fn undo(&mut self) {
        if let Some(q) = self.order.pop() {
            self.map.remove(&q);
        }
    }

    /// `{Q : Q↦1} |- {Q : Q↦0}`, in answer order.
    pub fn sequent(&self) -> Sequent {
        let (mut a, mut s) = (Vec::new(), Vec::new());
        for (q, b) in self.pairs() {
            if b { a.push(q) } else { s.push(q) }
        }
        Sequent::new(a, s)
    }
}

/// `{Q ↦ 0, Q ↦ 1}`, filed under `similarity` for formulas (`A ≲ A`) and
/// under `bool_const` for compound queries.
pub(crate) fn opposite(q: Query) -> Contradiction {
    let kind = if q.is_base() { Kind::Similarity } else { Kind::BoolConst };
    Contradiction::new(kind, vec![(q, false), (q, true)])
}

/// Immediate subqueries that a contradiction schema may relate to `q`.
fn parts(q: Query, e: &ExtAxiomSet) -> Vec<Query> {
    match q.node() {
        QNode::Not(a) => vec![a],
        QNode::Or(a, b) | QNode::And(a, b) => vec![a, b],
        QNode::Base(f) => match f.node() {
            Node::Dec(a, p, b) => vec![Query::base(a), Query::base(Formula::var(p)), Query::base(b)],
            Node::Or(a, b) | Node::And(a, b) => vec![Query::base(a), Query::base(b)],
            Node::Ext(v) => e.def(v).map(Query::base).into_iter().collect(),
            _ => vec![],
        },
    }
}

const DEFAULT_SIM_BUDGET: usize = 4096;

/// Contradiction detection over a fixed axiom set, with a memoized
/// simulation checker.
pub struct Detector<'a> {
    e: &'a ExtAxiomSet,
    sys: System,
    sim: Simulator<'a>,
    classes: HashMap<Formula, FormulaClass>,
    admitted: HashMap<Query, bool>,
    /// Similarity pair checks allowed per detection call.
    pub sim_budget: usize,
}

impl<'a> Detector<'a> {
    pub fn new(e: &'a ExtAxiomSet, sys: System) -> Detector<'a> {
        Detector { e, sys, sim: Simulator::new(e), classes: HashMap::new(), admitted: HashMap::new(), sim_budget: DEFAULT_SIM_BUDGET }
    }

    pub fn axioms(&self) -> &'a ExtAxiomSet {
        self.e
    }

    pub fn system(&self) -> System {
        self.sys
    }

    /// Rejects queries outside the system's language.
    pub fn admit(&mut self, q: Query) -> Result<(), GameError> {
        if let Some(&ok) = self.admitted.get(&q) {
            return if ok { Ok(()) } else { Err(self.reject(q)) };
        }
        let mut ok = true;
        for f in q.leaves() {
            let c = classify_memo(f, self.e, &mut self.classes)?;
            ok &= match self.sys {
                System::DB => c.is_edt(),
                System::NB => c.is_endt(),
            };
        }
        self.admitted.insert(q, ok);
        if ok { Ok(()) } else { Err(self.reject(q)) }
    }

    fn reject(&self, q: Query) -> GameError {
        let what = match self.sys {
            System::DB => "Bool(eDT)",
            System::NB => "Bool(eNDT)",
        };
        GameError::Class(format!("{q} is not a {what} query"))
    }

    /// A contradiction of the schema whose principal query is `x`, if the
    /// state has one.
    fn at(&self, st: &GameState, x: Query) -> Option<Contradiction> {
        let v = st.get(x)?;
        let val = |q: Query| st.get(q);
        match x.node() {
            QNode::Base(f) => match f.node() {
                Node::Zero | Node::One => {
                    let c = f.as_const().expect("constant");
                    (c != v).then(|| Contradiction::new(Kind::BoolConst, vec![(x, v)]))
                }
                Node::Dec(a, p, b) => {
                    let pq = Query::base(Formula::var(p));
                    let i = val(pq)?;
                    let branch = Query::base(if i { b } else { a });
                    let c = val(branch)?;
                    (c != v).then(|| Contradiction::new(Kind::Decision, vec![(x, v), (pq, i), (branch, c)]))
                }
                Node::Ext(w) => {
                    let d = Query::base(self.e.def(w)?);
                    let c = val(d)?;
                    (c != v).then(|| Contradiction::new(Kind::Extension, vec![(x, v), (d, c)]))
                }
                Node::Or(..) => self.junction(st, x, v, true),
                Node::And(..) => self.junction(st, x, v, false),
                Node::Var(_) => None,
            },
            QNode::Not(a) => {
                let c = val(a)?;
                (c == v).then(|| Contradiction::new(Kind::ConnectiveNot, vec![(a, c), (x, v)]))
            }
            QNode::Or(..) => self.junction(st, x, v, true),
            QNode::And(..) => self.junction(st, x, v, false),
        }
    }

    /// `∨` (or, dually, `∧`) schemas at `x ↦ v`.
    fn junction(&self, st: &GameState, x: Query, v: bool, or: bool) -> Option<Contradiction> {
        let (a, b) = if or { x.split_or()? } else { x.split_and()? };
        let kind = if or { Kind::ConnectiveOr } else { Kind::ConnectiveAnd };
        // The absorbing value: 1 for ∨, 0 for ∧.
        let absorb = or;
        if v != absorb {
            for c in [a, b] {
                if st.get(c) == Some(absorb) {
                    return Some(Contradiction::new(kind, vec![(x, v), (c, absorb)]));
                }
            }
            None
        } else {
            let (ca, cb) = (st.get(a)?, st.get(b)?);
            (ca != absorb && cb != absorb).then(|| Contradiction::new(kind, vec![(x, v), (a, ca), (b, cb)]))
        }
    }

    fn similar(&mut self, st: &GameState, q: Query, v: bool, budget: &mut usize) -> Option<Contradiction> {
        let f = q.as_base()?;
        for (r, c) in st.pairs() {
            if c == v || r == q {
                continue;
            }
            let Some(g) = r.as_base() else { continue };
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            // {A ↦ 0, B ↦ 1} with A ≲ B.
            let (lo, hi) = if v { (g, f) } else { (f, g) };
            if self.sim.check(lo, hi) {
                let (ql, qh) = (Query::base(lo), Query::base(hi));
                return Some(Contradiction::new(Kind::Similarity, vec![(ql, false), (qh, true)]));
            }
        }
        None
    }

    /// A contradiction involving the latest assignment `q ↦ b`, which
    /// `st` already contains.
    pub fn on_assign(&mut self, st: &GameState, q: Query) -> Option<Contradiction> {
        let v = st.get(q)?;
        if let Some(c) = self.at(st, q) {
            return Some(c);
        }
        for (x, _) in st.pairs() {
            if x != q && parts(x, self.e).contains(&q) {
                if let Some(c) = self.at(st, x) {
                    return Some(c);
                }
            }
        }
        let mut budget = self.sim_budget;
        self.similar(st, q, v, &mut budget)
    }

    /// Every contradiction in `st`, by exhaustive scan.
    pub fn detect_all(&mut self, st: &GameState) -> Vec<Contradiction> {
        let mut out: Vec<Contradiction> = Vec::new();
        for (x, _) in st.pairs() {
            if let Some(c) = self.at(st, x) {
                out.push(c);
            }
        }
        let mut budget = self.sim_budget;
        for (x, v) in st.pairs() {
            if v {
                continue;
            }
            if let Some(c) = self.similar(st, x, v, &mut budget) {
                out.push(c);
            }
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|c| {
            let mut w = c.witness.clone();
            w.sort();
            seen.insert((c.kind, w))
        });
        out
    }

    /// A contradiction of the given kind, if `st` has one.
    pub fn find_kind(&mut self, st: &GameState, kind: Kind) -> Option<Contradiction> {
        if kind == Kind::Similarity {
            let mut budget = usize::MAX;
            return st.pairs().filter(|p| !p.1).find_map(|(x, v)| self.similar(st, x, v, &mut budget));
        }
        st.pairs().find_map(|(x, _)| self.at(st, x).filter(|c| c.kind == kind))
    }

    /// Some contradiction in `st`, preferring the cheap kinds.
    pub fn first(&mut self, st: &GameState) -> Option<Contradiction> {
        st.pairs().find_map(|(x, _)| self.at(st, x)).or_else(|| {
            let mut budget = self.sim_budget;
            st.pairs().filter(|p| !p.1).find_map(|(x, v)| self.similar(st, x, v, &mut budget))
        })
    }
}

/// Every simple contradiction present in a state.
pub fn detect(st: &GameState, e: &ExtAxiomSet, sys: System) -> Result<Vec<Contradiction>, GameError> {
    let mut d = Detector::new(e, sys);
    for (q, _) in st.pairs() {
        d.admit(q)?;
    }
    Ok(d.detect_all(st))
}
