use std::collections::HashMap;

use super::SemError;
use crate::syntax::{classify, ExtAxiomSet, Formula, Node};

/// The rule concluding `A ≲_E B` at the root of a derivation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SimRule {
    /// `A ≲ A`.
    Refl,
    /// `ApB ≲ CpD` from `A ≲ C` and `B ≲ D`.
    DecDec,
    /// `A ≲ e` from `A ≲ E`.
    ExtRight,
    /// `e ≲ B` from `E ≲ B`.
    ExtLeft,
    /// `A ≲ C∨D` from `A ≲ C` and `A ≲ D`.
    OrRight,
    /// `A₀∨A₁ ≲ B` from `A_side ≲ B`.
    OrLeft(bool),
}

/// Memoized decision procedure for `≲_E`, caching failures as well.
pub struct Simulator<'a> {
    e: &'a ExtAxiomSet,
    memo: HashMap<(Formula, Formula), Option<SimRule>>,
}

impl<'a> Simulator<'a> {
    pub fn new(e: &'a ExtAxiomSet) -> Simulator<'a> {
        Simulator { e, memo: HashMap::new() }
    }

    pub fn axioms(&self) -> &ExtAxiomSet {
        self.e
    }

    pub fn check(&mut self, a: Formula, b: Formula) -> bool {
        self.rule(a, b).is_some()
    }

    /// The first rule (in search order) that derives `a ≲ b`.
    pub fn rule(&mut self, a: Formula, b: Formula) -> Option<SimRule> {
        if let Some(&r) = self.memo.get(&(a, b)) {
            return r;
        }
        let r = self.search(a, b);
        self.memo.insert((a, b), r);
        r
    }

    fn search(&mut self, a: Formula, b: Formula) -> Option<SimRule> {
        if a == b {
            return Some(SimRule::Refl);
        }
        if let (Node::Dec(a0, p, a1), Node::Dec(b0, q, b1)) = (a.node(), b.node()) {
            if p == q && self.check(a0, b0) && self.check(a1, b1) {
                return Some(SimRule::DecDec);
            }
        }
        if let Node::Ext(v) = b.node() {
            if self.check(a, self.e.def(v)?) {
                return Some(SimRule::ExtRight);
            }
        }
        if let Node::Ext(v) = a.node() {
            if self.check(self.e.def(v)?, b) {
                return Some(SimRule::ExtLeft);
            }
        }
        if let Node::Or(c, d) = b.node() {
            if self.check(a, c) && self.check(a, d) {
                return Some(SimRule::OrRight);
            }
        }
        if let Node::Or(a0, a1) = a.node() {
            if self.check(a0, b) {
                return Some(SimRule::OrLeft(false));
            }
            if self.check(a1, b) {
                return Some(SimRule::OrLeft(true));
            }
        }
        None
    }
}

/// Whether `A ≲_E B` is derivable.
pub fn check_simulation(a: Formula, b: Formula, e: &ExtAxiomSet) -> Result<bool, SemError> {
    classify(a, e)?;
    classify(b, e)?;
    Ok(Simulator::new(e).check(a, b))
}
