//! Branching programs as formulas with extension variables, sequent-calculus
//! proof checkers over them, Prover-Adversary games, and the translations
//! between proofs, strategies and systems.
//!
//! Formulas are hash-consed: see [`syntax::Formula`].

pub mod calculus;
pub mod constructions;
pub mod games;
pub mod semantics;
pub mod syntax;

pub use calculus::{check_proof, Mode, Proof, ProofLine, Rule, SystemId};
pub use semantics::{evaluate, sequent_valid, truth_table, Assignment, TruthTable};
pub use syntax::{ExtAxiomSet, ExtVar, Formula, PVar, Query, Sequent, Sort};
