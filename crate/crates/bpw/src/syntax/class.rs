use std::collections::HashMap;
use std::fmt;

use super::{ExtAxiomSet, Formula, Node, Sort, SyntaxError};

/// Syntactic features of a formula, closed under definitions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct FormulaClass {
    pub uses_or: bool,
    pub uses_and: bool,
    pub uses_ext: bool,
    pub sort_e: bool,
    pub sort_u: bool,
    pub sort_x: bool,
    /// Some `∧` has a `∨` below it.
    pub or_under_and: bool,
}

/// The smallest named class containing a formula.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Shape {
    Dt,
    Edt,
    Ndt,
    Endt,
    CoEndt,
    Eafdt,
    Mixed,
}

impl FormulaClass {
    pub fn join(self, o: FormulaClass) -> FormulaClass {
        FormulaClass {
            uses_or: self.uses_or | o.uses_or,
            uses_and: self.uses_and | o.uses_and,
            uses_ext: self.uses_ext | o.uses_ext,
            sort_e: self.sort_e | o.sort_e,
            sort_u: self.sort_u | o.sort_u,
            sort_x: self.sort_x | o.sort_x,
            or_under_and: self.or_under_and | o.or_under_and,
        }
    }

    pub fn with_sort(mut self, s: Sort) -> FormulaClass {
        self.uses_ext = true;
        match s {
            Sort::E => self.sort_e = true,
            Sort::U => self.sort_u = true,
            Sort::X => self.sort_x = true,
        }
        self
    }

    pub fn is_dt(self) -> bool {
        !self.uses_ext && !self.uses_or && !self.uses_and
    }
    pub fn is_edt(self) -> bool {
        !self.uses_or && !self.uses_and
    }
    pub fn is_ndt(self) -> bool {
        !self.uses_ext && !self.uses_and
    }
    pub fn is_endt(self) -> bool {
        !self.uses_and
    }
    pub fn is_coendt(self) -> bool {
        !self.uses_or
    }
    pub fn is_eafdt(self) -> bool {
        !self.or_under_and
    }

    pub fn shape(self) -> Shape {
        if self.is_dt() {
            Shape::Dt
        } else if self.is_edt() {
            Shape::Edt
        } else if self.is_ndt() {
            Shape::Ndt
        } else if self.is_endt() {
            Shape::Endt
        } else if self.is_coendt() {
            Shape::CoEndt
        } else if self.is_eafdt() {
            Shape::Eafdt
        } else {
            Shape::Mixed
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Dt => "DT",
            Shape::Edt => "eDT",
            Shape::Ndt => "NDT",
            Shape::Endt => "eNDT",
            Shape::CoEndt => "co-eNDT",
            Shape::Eafdt => "e∃∀DT",
            Shape::Mixed => "mixed",
        })
    }
}

/// Class of `f`, following extension variables through `e`.
pub fn classify(f: Formula, e: &ExtAxiomSet) -> Result<FormulaClass, SyntaxError> {
    let mut memo = HashMap::new();
    classify_memo(f, e, &mut memo)
}

pub(crate) fn classify_memo(
    f: Formula,
    e: &ExtAxiomSet,
    memo: &mut HashMap<Formula, FormulaClass>,
) -> Result<FormulaClass, SyntaxError> {
    if let Some(&c) = memo.get(&f) {
        return Ok(c);
    }
    let c = match f.node() {
        Node::Zero | Node::One | Node::Var(_) => FormulaClass::default(),
        Node::Ext(v) => e.var_class(v).ok_or_else(|| SyntaxError::Undefined(v.to_string()))?,
        Node::Dec(a, _, b) => classify_memo(a, e, memo)?.join(classify_memo(b, e, memo)?),
        Node::Or(a, b) => {
            let mut c = classify_memo(a, e, memo)?.join(classify_memo(b, e, memo)?);
            c.uses_or = true;
            c
        }
        Node::And(a, b) => {
            let (ca, cb) = (classify_memo(a, e, memo)?, classify_memo(b, e, memo)?);
            let mut c = ca.join(cb);
            c.or_under_and |= ca.uses_or || cb.uses_or;
            c.uses_and = true;
            c
        }
    };
    memo.insert(f, c);
    Ok(c)
}
