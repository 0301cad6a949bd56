use super::{finish, sq, ConstructionError, GeneratedProof, Result};
use crate::calculus::{ProofBuilder, SystemId};
use crate::semantics::{SimRule, Simulator};
use crate::syntax::{classify, ExtAxiomSet, Formula, Node, Query};

/// A proof of `B |- A` whenever `A ≲_E B`, following the simulation
/// derivation rule by rule. eLDT when every formula involved is ∨-free.
pub fn prove_simulation(a: Formula, b: Formula, e: &ExtAxiomSet) -> Result<GeneratedProof> {
    let det = classify(a, e)?.is_edt() && classify(b, e)?.is_edt();
    let mut sim = Simulator::new(e);
    if !sim.check(a, b) {
        return Err(ConstructionError::NotSimulated(a.to_string(), b.to_string()));
    }
    let mut bld = ProofBuilder::new(e.clone());
    let root = sim_line(&mut bld, &mut sim, a, b)?;
    let sys = if det { SystemId::ELdt } else { SystemId::ELndt };
    Ok(finish(&bld, root, sys, format!("prop=simulation a={a} b={b}")))
}

/// Line proving `b |- a` inside an existing builder.
pub(crate) fn sim_line(bld: &mut ProofBuilder, sim: &mut Simulator, a: Formula, b: Formula) -> Result<usize> {
    let target = sq(&[b], &[a]);
    if let Some(i) = bld.lookup(&target) {
        return Ok(i);
    }
    let rule = sim.rule(a, b).ok_or_else(|| ConstructionError::NotSimulated(a.to_string(), b.to_string()))?;
    let cl = match rule {
        SimRule::Refl => return Ok(bld.id(Query::base(a))),
        SimRule::DecDec => {
            let (Node::Dec(a0, _, a1), Node::Dec(b0, _, b1)) = (a.node(), b.node()) else { unreachable!() };
            let mut cl = bld.dec_clauses(a).to_vec();
            cl.extend(bld.dec_clauses(b));
            cl.push(sim_line(bld, sim, a0, b0)?);
            cl.push(sim_line(bld, sim, a1, b1)?);
            cl
        }
        SimRule::ExtRight => {
            let v = b.as_ext().expect("ext");
            let d = sim.axioms().def(v).expect("defined");
            vec![bld.ext_lr(v)?, sim_line(bld, sim, a, d)?]
        }
        SimRule::ExtLeft => {
            let v = a.as_ext().expect("ext");
            let d = sim.axioms().def(v).expect("defined");
            vec![bld.ext_rl(v)?, sim_line(bld, sim, d, b)?]
        }
        SimRule::OrRight => {
            let Node::Or(c, d) = b.node() else { unreachable!() };
            let mut cl = bld.or_clauses(Query::base(b)).to_vec();
            cl.push(sim_line(bld, sim, a, c)?);
            cl.push(sim_line(bld, sim, a, d)?);
            cl
        }
        SimRule::OrLeft(side) => {
            let Node::Or(a0, a1) = a.node() else { unreachable!() };
            let x = if side { a1 } else { a0 };
            let o = bld.or_clauses(Query::base(a));
            vec![o[1 + side as usize], sim_line(bld, sim, x, b)?]
        }
    };
    Ok(bld.derive(&target, &cl)?)
}
