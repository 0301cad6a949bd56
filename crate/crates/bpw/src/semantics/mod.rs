//! Evaluation under assignments, truth tables, unfolding and the simulation
//! preorder.

mod simulation;
mod table;

pub use simulation::{check_simulation, SimRule, Simulator};
pub use table::{sequent_countermodel, sequent_valid, truth_table, truth_table_query, TruthTable};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::syntax::{ExtAxiomSet, Formula, Node, PVar, QNode, Query, SyntaxError};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SemError {
    #[error("undefined extension variable {0}")]
    Undefined(String),
    #[error("variable {0} outside the universe")]
    OutsideUniverse(String),
    #[error("{n} variables exceed the brute-force cap of {cap} (set BPW_MAX_VARS)")]
    CapExceeded { n: usize, cap: usize },
    #[error("class violation: {0}")]
    Class(String),
    #[error("unfolding exceeds the size cap of {0}")]
    UnfoldCap(u64),
}

impl From<SyntaxError> for SemError {
    fn from(e: SyntaxError) -> Self {
        match e {
            SyntaxError::Undefined(v) => SemError::Undefined(v),
            other => SemError::Class(other.to_string()),
        }
    }
}

/// Default cap on brute-force variables.
pub const DEFAULT_MAX_VARS: usize = 20;

/// The brute-force cap, from `BPW_MAX_VARS` when set.
pub fn max_vars() -> usize {
    std::env::var("BPW_MAX_VARS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_VARS)
}

/// A total map from a finite universe of variables to bits.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Assignment {
    map: BTreeMap<PVar, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn set(&mut self, p: PVar, b: bool) {
        self.map.insert(p, b);
    }

    pub fn get(&self, p: PVar) -> Option<bool> {
        self.map.get(&p).copied()
    }

    pub fn universe(&self) -> Vec<PVar> {
        self.map.keys().copied().collect()
    }

    /// The `index`-th assignment over `universe`; the first variable is the
    /// most significant bit.
    pub fn from_index(universe: &[PVar], index: u64) -> Assignment {
        let n = universe.len();
        let mut a = Assignment::new();
        for (i, &p) in universe.iter().enumerate() {
            a.set(p, (index >> (n - 1 - i)) & 1 == 1);
        }
        a
    }

    /// Parses `p1=1,p2=0`.
    pub fn parse(text: &str) -> Result<Assignment, String> {
        let mut a = Assignment::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("expected name=bit, got `{part}`"))?;
            let b = match v.trim() {
                "0" => false,
                "1" => true,
                other => return Err(format!("bad bit `{other}`")),
            };
            let k = k.trim();
            if !(k.len() > 1 && k.starts_with('p')) {
                return Err(format!("bad variable `{k}`"));
            }
            a.set(PVar::new(k), b);
        }
        Ok(a)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|(p, b)| format!("{p}={}", *b as u8)).collect();
        f.write_str(&parts.join(","))
    }
}

/// Memoizing evaluator for one assignment.
pub struct Evaluator<'a> {
    e: &'a ExtAxiomSet,
    alpha: &'a Assignment,
    memo: HashMap<Formula, bool>,
}

impl<'a> Evaluator<'a> {
    pub fn new(alpha: &'a Assignment, e: &'a ExtAxiomSet) -> Evaluator<'a> {
        Evaluator { e, alpha, memo: HashMap::new() }
    }

    fn var(&self, p: PVar) -> Result<bool, SemError> {
        self.alpha.get(p).ok_or_else(|| SemError::OutsideUniverse(p.to_string()))
    }

    pub fn formula(&mut self, root: Formula) -> Result<bool, SemError> {
        if let Some(&b) = self.memo.get(&root) {
            return Ok(b);
        }
        let mut stack = vec![(root, false)];
        while let Some((f, ready)) = stack.pop() {
            if self.memo.contains_key(&f) {
                continue;
            }
            let deps: Vec<Formula> = match f.node() {
                Node::Dec(a, p, b) => {
                    if self.var(p)? {
                        vec![b]
                    } else {
                        vec![a]
                    }
                }
                Node::Or(a, b) | Node::And(a, b) => vec![a, b],
                Node::Ext(v) => vec![self.e.def(v).ok_or_else(|| SemError::Undefined(v.to_string()))?],
                _ => Vec::new(),
            };
            let missing: Vec<Formula> = deps.iter().copied().filter(|d| !self.memo.contains_key(d)).collect();
            if !missing.is_empty() {
                if ready {
                    unreachable!("dependency cycle in evaluation");
                }
                stack.push((f, true));
                stack.extend(missing.into_iter().map(|d| (d, false)));
                continue;
            }
            let m = &self.memo;
            let val = match f.node() {
                Node::Zero => false,
                Node::One => true,
                Node::Var(p) => self.var(p)?,
                Node::Dec(..) | Node::Ext(_) => m[&deps[0]],
                Node::Or(a, b) => m[&a] || m[&b],
                Node::And(a, b) => m[&a] && m[&b],
            };
            self.memo.insert(f, val);
        }
        Ok(self.memo[&root])
    }

    pub fn query(&mut self, q: Query) -> Result<bool, SemError> {
        Ok(match q.node() {
            QNode::Base(f) => self.formula(f)?,
            QNode::Not(a) => !self.query(a)?,
            QNode::Or(a, b) => self.query(a)? | self.query(b)?,
            QNode::And(a, b) => self.query(a)? & self.query(b)?,
        })
    }
}

/// `α ⊨_E f`.
pub fn evaluate(alpha: &Assignment, f: Formula, e: &ExtAxiomSet) -> Result<bool, SemError> {
    Evaluator::new(alpha, e).formula(f)
}

/// Truth-functional evaluation of a query.
pub fn evaluate_query(alpha: &Assignment, q: Query, e: &ExtAxiomSet) -> Result<bool, SemError> {
    Evaluator::new(alpha, e).query(q)
}

/// Default cap on the term size of an unfolding.
pub const DEFAULT_UNFOLD_CAP: u64 = 1 << 20;

/// Substitutes definitions for extension variables in an ∨-free formula.
pub fn unfold(f: Formula, e: &ExtAxiomSet, cap: u64) -> Result<Formula, SemError> {
    let mut memo: HashMap<Formula, (Formula, u64)> = HashMap::new();
    let (g, _) = unfold_rec(f, e, cap, &mut memo)?;
    Ok(g)
}

fn unfold_rec(
    f: Formula,
    e: &ExtAxiomSet,
    cap: u64,
    memo: &mut HashMap<Formula, (Formula, u64)>,
) -> Result<(Formula, u64), SemError> {
    if let Some(&r) = memo.get(&f) {
        return Ok(r);
    }
    let r = match f.node() {
        Node::Zero | Node::One | Node::Var(_) => (f, 1),
        Node::Dec(a, p, b) => {
            let (ua, sa) = unfold_rec(a, e, cap, memo)?;
            let (ub, sb) = unfold_rec(b, e, cap, memo)?;
            let s = 1 + sa + sb;
            if s > cap {
                return Err(SemError::UnfoldCap(cap));
            }
            (Formula::dec(ua, p, ub), s)
        }
        Node::Ext(v) => {
            let d = e.def(v).ok_or_else(|| SemError::Undefined(v.to_string()))?;
            unfold_rec(d, e, cap, memo)?
        }
        Node::Or(..) | Node::And(..) => {
            return Err(SemError::Class(format!("unfolding needs an ∨/∧-free formula, got {f}")))
        }
    };
    memo.insert(f, r);
    Ok(r)
}
