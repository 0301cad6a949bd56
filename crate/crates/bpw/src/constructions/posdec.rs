use super::{sq, ConstructionError, Result};
use crate::calculus::ProofBuilder;
use crate::syntax::{ExtAxiomSet, ExtVar, Formula, Node, Query, Sequent, Sort};

/// Positive decisions `pdec(A,B,C)` over a base axiom set, with their
/// truth conditions.
///
/// The variable `pdec(A,B,C)` is keyed by the triple; its axiom follows the
/// shape of `B`:
///
/// | `B`            | definition                          |
/// |----------------|-------------------------------------|
/// | `0`            | `A`                                 |
/// | `1`            | `A ∨ C`                             |
/// | `B0 ∨ B1`      | `pdec(A,B0,C) ∨ pdec(A,B1,C)`       |
/// | `dec(B0,p,B1)` | `dec(pdec(A,B0,C), p, pdec(A,B1,C))`|
/// | `p`            | `dec(A, p, A ∨ C)`                  |
/// | `e`            | `pdec(A,E,C)`                       |
pub struct PosAxiomStore {
    pub builder: ProofBuilder,
}

impl PosAxiomStore {
    pub fn new(base: ExtAxiomSet) -> PosAxiomStore {
        PosAxiomStore { builder: ProofBuilder::new(base) }
    }

    pub fn from_builder(builder: ProofBuilder) -> PosAxiomStore {
        PosAxiomStore { builder }
    }

    pub fn axioms(&self) -> &ExtAxiomSet {
        &self.builder.axioms
    }

    pub fn var(a: Formula, b: Formula, c: Formula) -> ExtVar {
        ExtVar::gen(Sort::E, "pdec", vec![a, b, c], vec![])
    }

    /// The extension variable `pdec(A,B,C)` as a formula, defining it (and
    /// everything it needs) on first use.
    pub fn pdec(&mut self, a: Formula, b: Formula, c: Formula) -> Result<Formula> {
        let v = Self::var(a, b, c);
        if !self.builder.axioms.contains(v) {
            let def = match b.node() {
                Node::Zero => a,
                Node::One => Formula::or(a, c),
                Node::Or(b0, b1) => Formula::or(self.pdec(a, b0, c)?, self.pdec(a, b1, c)?),
                Node::Dec(b0, p, b1) => Formula::dec(self.pdec(a, b0, c)?, p, self.pdec(a, b1, c)?),
                Node::Var(p) => Formula::dec(a, p, Formula::or(a, c)),
                Node::Ext(w) => {
                    let d = self
                        .builder
                        .axioms
                        .def(w)
                        .ok_or_else(|| ConstructionError::Class(format!("{b} is undefined")))?;
                    self.pdec(a, d, c)?
                }
                Node::And(..) => {
                    return Err(ConstructionError::Class(format!("positive decision on {b}, which uses ∧")))
                }
            };
            self.builder.axioms.ensure(v, def)?;
        }
        Ok(Formula::ext(v))
    }

    /// Lines proving `P |- A,B`, `P |- A,C`, `A |- P` and `B,C |- P` for
    /// `P = pdec(A,B,C)`.
    pub fn truth(&mut self, a: Formula, b: Formula, c: Formula) -> Result<[usize; 4]> {
        let p = self.pdec(a, b, c)?;
        let targets = [sq(&[p], &[a, b]), sq(&[p], &[a, c]), sq(&[a], &[p]), sq(&[b, c], &[p])];
        if let [Some(x), Some(y), Some(z), Some(w)] = targets.each_ref().map(|t| self.builder.lookup(t)) {
            return Ok([x, y, z, w]);
        }
        let v = p.as_ext().expect("pdec is a variable");
        let def = self.builder.axioms.def(v).expect("defined above");
        let bld = &mut self.builder;
        let mut cl = bld.ext_clauses(v)?.to_vec();
        match b.node() {
            Node::Zero => cl.push(bld.zero_l()),
            Node::One => {
                cl.push(bld.one_r());
                cl.extend(bld.or_clauses(Query::base(def)));
            }
            Node::Var(_) => {
                cl.extend(bld.dec_clauses(def));
                let Node::Dec(_, _, ac) = def.node() else { unreachable!() };
                cl.extend(bld.or_clauses(Query::base(ac)));
            }
            Node::Or(b0, b1) => {
                cl.extend(bld.or_clauses(Query::base(def)));
                cl.extend(bld.or_clauses(Query::base(b)));
                cl.extend(self.truth(a, b0, c)?);
                cl.extend(self.truth(a, b1, c)?);
            }
            Node::Dec(b0, _, b1) => {
                cl.extend(bld.dec_clauses(def));
                cl.extend(bld.dec_clauses(b));
                cl.extend(self.truth(a, b0, c)?);
                cl.extend(self.truth(a, b1, c)?);
            }
            Node::Ext(w) => {
                cl.extend(bld.ext_clauses(w)?);
                let d = self.builder.axioms.def(w).expect("checked in pdec");
                cl.extend(self.truth(a, d, c)?);
            }
            Node::And(..) => unreachable!("rejected by pdec"),
        }
        let mut out = [0; 4];
        for (o, t) in out.iter_mut().zip(&targets) {
            *o = self.builder.derive(t, &cl)?;
        }
        Ok(out)
    }

    /// `B⁺-l`: `Γ, P |- Δ` from `Γ, A |- Δ` (line `l0`) and `Γ, B, C |- Δ`
    /// (line `l1`).
    pub fn left_rule(&mut self, concl: &Sequent, a: Formula, b: Formula, c: Formula, l0: usize, l1: usize) -> Result<usize> {
        let t = self.truth(a, b, c)?;
        Ok(self.builder.derive(concl, &[l0, l1, t[0], t[1]])?)
    }

    /// `B⁺-r`: `Γ |- Δ, P` from `Γ |- Δ, A, B` (line `l0`) and
    /// `Γ |- Δ, A, C` (line `l1`).
    pub fn right_rule(&mut self, concl: &Sequent, a: Formula, b: Formula, c: Formula, l0: usize, l1: usize) -> Result<usize> {
        let t = self.truth(a, b, c)?;
        Ok(self.builder.derive(concl, &[l0, l1, t[2], t[3]])?)
    }
}
