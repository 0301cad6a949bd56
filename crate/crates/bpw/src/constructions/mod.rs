//! Proof and program generators.
//!
//! Every generator works on a [`ProofBuilder`], growing its axiom set with
//! structurally keyed extension variables and sharing lemma lines, and hands
//! out [`GeneratedProof`]s restricted to one conclusion.

mod boolelim;
mod decider;
mod duality;
mod ktrans;
mod posdec;
pub mod samples;
mod poselim;
mod simulation;
mod threshold;

pub use boolelim::{eliminate_bool_lk_eldt, BoolCompiler};
pub use decider::DeciderStore;
pub use duality::{bar_var, coelndt_to_elndt, dualize_proof, excluded_middle, negate_coendt, Negation};
pub use ktrans::{collapse_eafdt, k_translate, prove_k_sequent, KContext};
pub use posdec::PosAxiomStore;
pub use poselim::eliminate_pos_lk_elndt;
pub use simulation::prove_simulation;
pub(crate) use simulation::sim_line;
pub use threshold::{ThresholdReport, ThresholdStore};

use crate::calculus::{check_proof, DeriveError, LineError, Mode, Proof, ProofBuilder, SystemId};
use crate::syntax::{Formula, Query, Sequent, SyntaxError};

#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Derive(#[from] DeriveError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("class violation: {0}")]
    Class(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("{0} does not simulate {1}")]
    NotSimulated(String, String),
    #[error("input proof fails to check at line {}: {}", .0.id, .0.kind)]
    Input(LineError),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, ConstructionError>;

/// A proof together with the system it is meant to check in.
#[derive(Clone, Debug)]
pub struct GeneratedProof {
    pub proof: Proof,
    pub system: SystemId,
}

impl GeneratedProof {
    pub fn new(proof: Proof, system: SystemId) -> GeneratedProof {
        GeneratedProof { proof, system }
    }

    pub fn conclusion(&self) -> &Sequent {
        self.proof.conclusion().expect("generated proofs are nonempty")
    }

    pub fn check(&self) -> std::result::Result<(), LineError> {
        check_proof(&self.proof, self.system, Mode::Multiset)
    }
}

pub(crate) fn finish(b: &ProofBuilder, root: usize, sys: SystemId, tag: String) -> GeneratedProof {
    GeneratedProof::new(b.finish(root).with_provenance(tag), sys)
}

/// Items occurring more often in `a` than in `b`, once each.
pub(crate) fn excess(a: &[Query], b: &[Query]) -> Vec<Query> {
    let mut out: Vec<Query> = a.iter().filter(|q| a.iter().filter(|x| x == q).count() > b.iter().filter(|x| x == q).count()).copied().collect();
    out.sort();
    out.dedup();
    out
}

pub(crate) fn sq(ante: &[Formula], succ: &[Formula]) -> Sequent {
    Sequent::of(ante, succ)
}

pub(crate) fn input_check(p: &Proof, sys: SystemId) -> Result<()> {
    check_proof(p, sys, Mode::Multiset).map_err(ConstructionError::Input)
}
