//! Prover-Adversary games over Boolean queries.
//!
//! Prover asks queries, Adversary answers with bits, and Prover wins once
//! the answers contain a simple contradiction. A [`Strategy`] is Prover's
//! decision tree.

mod build;
mod dm;
mod play;
mod state;
mod strategy;
mod toproof;

pub use build::{local_initial, local_soundness, proof_to_strategy, strat_find_force, Goal, Play};
pub use dm::{dm_hole, dm_query, dm_signed, dm_strategy, duality_strategy, leibniz_strategy, replace_at, spira_subtree, sub_at};
pub use play::{play, scripted, Event, Transcript};
pub use state::{detect, Assigned, Contradiction, Detector, GameState, Kind};
pub use strategy::{query_metrics, verify_partial, verify_strategy, QueryMetrics, Strategy, StrategyFile, Verified};
pub use toproof::{strategy_to_proof_det, strategy_to_proof_nondet};

use std::fmt;
use std::str::FromStr;

use crate::constructions::ConstructionError;
use crate::syntax::SyntaxError;

/// The two games: deterministic (`DB`, queries over eDT formulas) and
/// nondeterministic (`NB`, queries over eNDT formulas).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum System {
    DB,
    NB,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::DB => "DB",
            System::NB => "NB",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<System, String> {
        match s.to_ascii_uppercase().as_str() {
            "DB" => Ok(System::DB),
            "NB" => Ok(System::NB),
            _ => Err(format!("unknown game `{s}` (expected DB or NB)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("{0}")]
    Class(String),
    #[error("strategy fails at [{path}]: {msg}")]
    Fails { path: String, msg: String },
    #[error("no contradiction reachable: {0}")]
    Stuck(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("malformed strategy file: {0}")]
    Shape(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Input(String),
}

impl From<crate::calculus::DeriveError> for GameError {
    fn from(e: crate::calculus::DeriveError) -> GameError {
        GameError::Construction(e.into())
    }
}

pub type Result<T> = std::result::Result<T, GameError>;

/// Renders an answer path such as `1.0.1`.
pub(crate) fn path_string(path: &[bool]) -> String {
    path.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(".")
}
