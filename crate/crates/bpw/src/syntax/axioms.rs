use std::collections::{HashMap, HashSet};

use super::class::classify_memo;
use super::{ExtVar, Formula, FormulaClass, Node, SyntaxError};

/// An ordered, well-founded table of extension axioms `e := E`.
///
/// The index of a variable is its position; every definition may only
/// mention variables with a smaller index.
#[derive(Clone, Default, Debug)]
pub struct ExtAxiomSet {
    entries: Vec<(ExtVar, Formula)>,
    index: HashMap<ExtVar, usize>,
    classes: Vec<FormulaClass>,
}

/// A definition referring to a variable that is not defined earlier.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AxiomViolation {
    pub var: ExtVar,
    pub reference: ExtVar,
}

impl ExtAxiomSet {
    pub fn new() -> ExtAxiomSet {
        ExtAxiomSet::default()
    }

    /// Builds a set from pairs in index order, rejecting ill-founded input.
    pub fn from_pairs(pairs: &[(ExtVar, Formula)]) -> Result<ExtAxiomSet, SyntaxError> {
        if let Some(v) = ExtAxiomSet::validate(pairs).first() {
            if v.var == v.reference && pairs.iter().filter(|(w, _)| *w == v.var).count() > 1 {
                return Err(SyntaxError::Duplicate(v.var.to_string()));
            }
            return Err(SyntaxError::IllFounded { var: v.var.to_string(), reference: v.reference.to_string() });
        }
        let mut e = ExtAxiomSet::new();
        for &(v, f) in pairs {
            e.define(v, f)?;
        }
        Ok(e)
    }

    /// Every `(var, reference)` pair breaking well-foundedness. A repeated
    /// definition is reported with the variable as its own reference.
    pub fn validate(pairs: &[(ExtVar, Formula)]) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        let mut defined: HashSet<ExtVar> = HashSet::new();
        for &(v, f) in pairs {
            if defined.contains(&v) {
                out.push(AxiomViolation { var: v, reference: v });
            }
            for r in ext_vars_of(f) {
                if !defined.contains(&r) {
                    out.push(AxiomViolation { var: v, reference: r });
                }
            }
            defined.insert(v);
        }
        out
    }

    /// Appends `v := f`; all variables of `f` must already be defined.
    pub fn define(&mut self, v: ExtVar, f: Formula) -> Result<(), SyntaxError> {
        if self.index.contains_key(&v) {
            return Err(SyntaxError::Duplicate(v.to_string()));
        }
        let mut memo = HashMap::new();
        let c = classify_memo(f, self, &mut memo).map_err(|err| match err {
            SyntaxError::Undefined(r) => SyntaxError::IllFounded { var: v.to_string(), reference: r },
            other => other,
        })?;
        self.index.insert(v, self.entries.len());
        self.entries.push((v, f));
        self.classes.push(c.with_sort(v.sort()));
        Ok(())
    }

    /// Like [`define`](Self::define) but accepts an identical redefinition.
    pub fn ensure(&mut self, v: ExtVar, f: Formula) -> Result<(), SyntaxError> {
        match self.def(v) {
            Some(g) if g == f => Ok(()),
            Some(_) => Err(SyntaxError::Duplicate(v.to_string())),
            None => self.define(v, f),
        }
    }

    pub fn def(&self, v: ExtVar) -> Option<Formula> {
        self.index.get(&v).map(|&i| self.entries[i].1)
    }

    pub fn idx(&self, v: ExtVar) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn contains(&self, v: ExtVar) -> bool {
        self.index.contains_key(&v)
    }

    pub fn var_class(&self, v: ExtVar) -> Option<FormulaClass> {
        self.index.get(&v).map(|&i| self.classes[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(ExtVar, Formula)] {
        &self.entries
    }

    /// Adds every axiom of `other` not yet present, in `other`'s order.
    pub fn extend_from(&mut self, other: &ExtAxiomSet) -> Result<(), SyntaxError> {
        for &(v, f) in &other.entries {
            self.ensure(v, f)?;
        }
        Ok(())
    }

    /// Sum of the sizes of all definitions.
    pub fn total_size(&self) -> u64 {
        self.entries.iter().map(|&(_, f)| super::formula_size(f)).sum()
    }
}

/// Extension variables occurring syntactically in `f` (not through definitions).
pub fn ext_vars_of(f: Formula) -> Vec<ExtVar> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if !seen.insert(g) {
            continue;
        }
        match g.node() {
            Node::Ext(v) => out.push(v),
            Node::Dec(a, _, b) | Node::Or(a, b) | Node::And(a, b) => {
                stack.push(b);
                stack.push(a);
            }
            _ => {}
        }
    }
    out
}
