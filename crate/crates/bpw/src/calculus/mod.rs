//! Proofs as DAGs of sequent lines, and rule-by-rule checkers.

mod builder;
mod check;
pub(crate) mod io;

pub use builder::{DeriveError, ProofBuilder};
pub use check::{check_proof, check_proof_all, LineError, LineErrorKind, Mode};
pub use io::{file_namer, load_axioms_value, proof_from_json, proof_to_json, ProofFileError};

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::semantics::{sequent_valid, SemError};
use crate::syntax::{sequent_size, ExtAxiomSet, ExtVar, PVar, Sequent};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum SystemId {
    Ldt,
    Lndt,
    ELdt,
    ELndt,
    LkELdt,
    LkPosELndt,
    CoELndt,
    ELEaDt,
}

impl SystemId {
    pub const ALL: [SystemId; 8] = [
        SystemId::Ldt,
        SystemId::Lndt,
        SystemId::ELdt,
        SystemId::ELndt,
        SystemId::LkELdt,
        SystemId::LkPosELndt,
        SystemId::CoELndt,
        SystemId::ELEaDt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemId::Ldt => "ldt",
            SystemId::Lndt => "lndt",
            SystemId::ELdt => "eldt",
            SystemId::ELndt => "elndt",
            SystemId::LkELdt => "lk_eldt",
            SystemId::LkPosELndt => "lkpos_elndt",
            SystemId::CoELndt => "co_elndt",
            SystemId::ELEaDt => "el_ea_dt",
        }
    }

    pub fn allows(self, r: Rule) -> bool {
        use SystemId::*;
        match r {
            Rule::Ext => !matches!(self, Ldt | Lndt),
            Rule::OrL | Rule::OrR => matches!(self, Lndt | ELndt | LkELdt | LkPosELndt | ELEaDt),
            Rule::AndL | Rule::AndR => matches!(self, LkELdt | LkPosELndt | CoELndt | ELEaDt),
            Rule::NotL | Rule::NotR => matches!(self, LkELdt),
            _ => true,
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let k = s.to_ascii_lowercase().replace(['-', '(', ')', '+'], "_");
        let k = k.trim_matches('_');
        Ok(match k {
            "ldt" => SystemId::Ldt,
            "lndt" => SystemId::Lndt,
            "eldt" => SystemId::ELdt,
            "elndt" => SystemId::ELndt,
            "lk_eldt" => SystemId::LkELdt,
            "lkpos_elndt" | "lk__elndt" => SystemId::LkPosELndt,
            "co_elndt" | "coelndt" => SystemId::CoELndt,
            "el_ea_dt" | "eleadt" => SystemId::ELEaDt,
            _ => return Err(format!("unknown system `{s}`")),
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Rule {
    Id,
    Cut,
    ExL,
    ExR,
    WL,
    WR,
    CL,
    CR,
    ZeroL,
    ZeroR,
    OneL,
    OneR,
    OrL,
    OrR,
    DecL,
    DecR,
    NotL,
    NotR,
    AndL,
    AndR,
    Ext,
}

impl Rule {
    pub const ALL: [Rule; 21] = [
        Rule::Id,
        Rule::Cut,
        Rule::ExL,
        Rule::ExR,
        Rule::WL,
        Rule::WR,
        Rule::CL,
        Rule::CR,
        Rule::ZeroL,
        Rule::ZeroR,
        Rule::OneL,
        Rule::OneR,
        Rule::OrL,
        Rule::OrR,
        Rule::DecL,
        Rule::DecR,
        Rule::NotL,
        Rule::NotR,
        Rule::AndL,
        Rule::AndR,
        Rule::Ext,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::Cut => "cut",
            Rule::ExL => "ex-l",
            Rule::ExR => "ex-r",
            Rule::WL => "w-l",
            Rule::WR => "w-r",
            Rule::CL => "c-l",
            Rule::CR => "c-r",
            Rule::ZeroL => "0-l",
            Rule::ZeroR => "0-r",
            Rule::OneL => "1-l",
            Rule::OneR => "1-r",
            Rule::OrL => "or-l",
            Rule::OrR => "or-r",
            Rule::DecL => "dec-l",
            Rule::DecR => "dec-r",
            Rule::NotL => "not-l",
            Rule::NotR => "not-r",
            Rule::AndL => "and-l",
            Rule::AndR => "and-r",
            Rule::Ext => "ext",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Id | Rule::ZeroL | Rule::OneR | Rule::Ext => 0,
            Rule::Cut | Rule::OrL | Rule::DecL | Rule::DecR | Rule::AndR => 2,
            _ => 1,
        }
    }

    pub fn is_structural(self) -> bool {
        matches!(self, Rule::ExL | Rule::ExR | Rule::WL | Rule::WR | Rule::CL | Rule::CR)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL.iter().copied().find(|r| r.name() == s).ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// Direction of an extension axiom: `lr` is `e |- E`, `rl` is `E |- e`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dir {
    Lr,
    Rl,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Aux {
    /// Position of the principal formula in its cedent.
    pub pos: Option<usize>,
    pub var: Option<PVar>,
    pub ext: Option<(ExtVar, Dir)>,
}

impl Aux {
    pub fn none() -> Aux {
        Aux::default()
    }

    pub fn ext(v: ExtVar, d: Dir) -> Aux {
        Aux { ext: Some((v, d)), ..Aux::default() }
    }

    pub fn var(p: PVar) -> Aux {
        Aux { var: Some(p), ..Aux::default() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofLine {
    pub id: usize,
    pub seq: Sequent,
    pub rule: Rule,
    pub prem: Vec<usize>,
    pub aux: Aux,
}

/// A list of lines; the last one is the conclusion.
#[derive(Clone, Debug, Default)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
    pub axioms: ExtAxiomSet,
    /// Free-form origin tag, e.g. `lemma=thresh_truth_4 j=2 k=1`.
    pub provenance: String,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Sequent> {
        self.lines.last().map(|l| &l.seq)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Sum of sequent sizes over distinct sequents.
    pub fn size(&self) -> u64 {
        let mut seen = HashSet::new();
        self.lines.iter().filter(|l| seen.insert(&l.seq)).map(|l| sequent_size(&l.seq)).sum()
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Proof {
        self.provenance = p.into();
        self
    }
}

/// Symbol count of a proof, counting each distinct sequent once.
pub fn proof_size(p: &Proof) -> u64 {
    p.size()
}

/// Semantic validity of every line (a debugging oracle).
pub fn check_lines_semantically(p: &Proof) -> Result<Vec<(usize, bool)>, SemError> {
    let mut cache: HashMap<Sequent, bool> = HashMap::new();
    let mut out = Vec::with_capacity(p.lines.len());
    for l in &p.lines {
        let key = l.seq.normalized();
        let ok = match cache.get(&key) {
            Some(&b) => b,
            None => {
                let b = sequent_valid(&l.seq, &p.axioms)?;
                cache.insert(key, b);
                b
            }
        };
        out.push((l.id, ok));
    }
    Ok(out)
}

/// Reference to a line in [`compose`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GlueRef {
    /// Line id of the first proof.
    Left(usize),
    /// Line id of the second proof.
    Right(usize),
    /// Index of an earlier glue line.
    Glue(usize),
}

#[derive(Clone, Debug)]
pub struct GlueLine {
    pub seq: Sequent,
    pub rule: Rule,
    pub aux: Aux,
    pub prem: Vec<GlueRef>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("unresolvable premise {0:?}")]
    Unresolved(GlueRef),
    #[error("no glue lines")]
    Empty,
    #[error("axiom sets conflict: {0}")]
    Axioms(String),
}

/// Stitches two proofs together with glue lines; identical lines are shared
/// and the last glue line is the conclusion.
pub fn compose(p1: &Proof, p2: &Proof, glue: &[GlueLine]) -> Result<Proof, ComposeError> {
    if glue.is_empty() {
        return Err(ComposeError::Empty);
    }
    let mut axioms = p1.axioms.clone();
    axioms.extend_from(&p2.axioms).map_err(|e| ComposeError::Axioms(e.to_string()))?;
    let mut out: Vec<ProofLine> = Vec::new();
    let mut key: HashMap<(Sequent, Rule, Aux, Vec<usize>), usize> = HashMap::new();
    let mut push = |l: ProofLine, out: &mut Vec<ProofLine>| -> usize {
        let k = (l.seq.clone(), l.rule, l.aux.clone(), l.prem.clone());
        if let Some(&i) = key.get(&k) {
            return i;
        }
        let i = out.len();
        out.push(ProofLine { id: i, ..l });
        key.insert(k, i);
        i
    };
    let mut maps: [HashMap<usize, usize>; 2] = [HashMap::new(), HashMap::new()];
    for (side, p) in [p1, p2].iter().enumerate() {
        for l in &p.lines {
            let prem = l
                .prem
                .iter()
                .map(|q| maps[side].get(q).copied().ok_or(ComposeError::Unresolved(GlueRef::Left(*q))))
                .collect::<Result<Vec<_>, _>>()?;
            let i = push(ProofLine { id: 0, seq: l.seq.clone(), rule: l.rule, prem, aux: l.aux.clone() }, &mut out);
            maps[side].insert(l.id, i);
        }
    }
    let mut glue_ids = Vec::new();
    for g in glue {
        let prem = g
            .prem
            .iter()
            .map(|r| match *r {
                GlueRef::Left(i) => maps[0].get(&i).copied(),
                GlueRef::Right(i) => maps[1].get(&i).copied(),
                GlueRef::Glue(i) => glue_ids.get(i).copied(),
            }
            .ok_or(ComposeError::Unresolved(*r)))
            .collect::<Result<Vec<_>, _>>()?;
        let i = push(ProofLine { id: 0, seq: g.seq.clone(), rule: g.rule, prem, aux: g.aux.clone() }, &mut out);
        glue_ids.push(i);
    }
    let root = *glue_ids.last().expect("nonempty glue");
    Ok(restrict(&out, root, axioms))
}

/// The sub-DAG below `root`, renumbered, with `root` last.
pub(crate) fn restrict(lines: &[ProofLine], root: usize, axioms: ExtAxiomSet) -> Proof {
    let mut keep = vec![false; lines.len()];
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        if !keep[i] {
            keep[i] = true;
            stack.extend(lines[i].prem.iter().copied());
        }
    }
    let mut map = HashMap::new();
    let mut out = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        if keep[i] && i != root {
            map.insert(i, out.len());
            out.push(ProofLine { id: out.len(), prem: l.prem.iter().map(|p| map[p]).collect(), ..l.clone() });
        }
    }
    let l = &lines[root];
    out.push(ProofLine { id: out.len(), prem: l.prem.iter().map(|p| map[p]).collect(), ..l.clone() });
    Proof { lines: out, axioms, provenance: String::new() }
}
