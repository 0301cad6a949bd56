use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::state::{Contradiction, Detector, GameState, Kind};
use super::{path_string, GameError, Result, System};
use crate::calculus::io::{file_namer, load_axioms_value};
use crate::syntax::{parse_query, render_axioms, render_query, ExtAxiomSet, Namer, QNode, Query};

/// Prover's decision tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// Prover claims a simple contradiction of this kind.
    Leaf(Kind),
    /// Unfinished: the combinators hand control back here.
    Open,
    /// Ask a query; continue with the first tree on 0, the second on 1.
    Ask(Query, Box<Strategy>, Box<Strategy>),
}

impl Strategy {
    pub fn ask(q: Query, on0: Strategy, on1: Strategy) -> Strategy {
        Strategy::Ask(q, Box::new(on0), Box::new(on1))
    }

    /// Longest root-leaf path, in Ask nodes.
    pub fn depth(&self) -> usize {
        match self {
            Strategy::Ask(_, a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Strategy::Ask(_, a, b) => a.leaf_count() + b.leaf_count(),
            _ => 1,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Strategy::Ask(_, a, b) => 1 + a.node_count() + b.node_count(),
            _ => 1,
        }
    }

    pub fn is_complete(&self) -> bool {
        match self {
            Strategy::Open => false,
            Strategy::Leaf(_) => true,
            Strategy::Ask(_, a, b) => a.is_complete() && b.is_complete(),
        }
    }

    /// Every query asked somewhere in the tree, first occurrence order.
    pub fn queries(&self) -> Vec<Query> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self];
        while let Some(s) = stack.pop() {
            if let Strategy::Ask(q, a, b) = s {
                if seen.insert(*q) {
                    out.push(*q);
                }
                stack.push(b);
                stack.push(a);
            }
        }
        out
    }

    /// Replaces each Open node, left to right, by `f()`.
    pub fn fill(self, f: &mut dyn FnMut() -> Strategy) -> Strategy {
        match self {
            Strategy::Open => f(),
            Strategy::Ask(q, a, b) => {
                let a = a.fill(f);
                Strategy::ask(q, a, b.fill(f))
            }
            s => s,
        }
    }
}

/// `depth(Q)` and `‖Q‖` of a Boolean query: nesting of connectives above
/// the maximal base formulas, and the number of their occurrences.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QueryMetrics {
    pub depth: usize,
    pub leafcount: usize,
}

pub fn query_metrics(q: Query) -> QueryMetrics {
    match q.node() {
        QNode::Base(_) => QueryMetrics { depth: 0, leafcount: 1 },
        QNode::Not(a) => {
            let m = query_metrics(a);
            QueryMetrics { depth: m.depth + 1, leafcount: m.leafcount }
        }
        QNode::Or(a, b) | QNode::And(a, b) => {
            let (x, y) = (query_metrics(a), query_metrics(b));
            QueryMetrics { depth: 1 + x.depth.max(y.depth), leafcount: x.leafcount + y.leafcount }
        }
    }
}

/// What a successful verification saw.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verified {
    /// Most rounds played on any path (re-asks of answered queries excluded).
    pub rounds: usize,
    pub leaves: usize,
    pub open: usize,
    pub kinds: BTreeMap<Kind, usize>,
}

struct Verifier<'a, 'g> {
    det: Detector<'a>,
    clash: Option<Contradiction>,
    goal: Option<&'g dyn Fn(&GameState) -> bool>,
    out: Verified,
    path: Vec<bool>,
}

impl Verifier<'_, '_> {
    fn fail(&self, msg: String) -> GameError {
        GameError::Fails { path: path_string(&self.path), msg }
    }

    fn walk(&mut self, s: &Strategy, st: &mut GameState, rounds: usize) -> Result<()> {
        match s {
            Strategy::Leaf(kind) => {
                let found = match &self.clash {
                    Some(c) if c.kind == *kind => true,
                    _ => self.det.find_kind(st, *kind).is_some(),
                };
                if !found {
                    let have = self.clash.clone().or_else(|| self.det.first(st));
                    let msg = match have {
                        Some(c) => format!("claimed {kind}, but the state only has {c}"),
                        None => format!("claimed {kind}, but the state {} has no simple contradiction", st.sequent()),
                    };
                    return Err(self.fail(msg));
                }
                self.out.leaves += 1;
                *self.out.kinds.entry(*kind).or_default() += 1;
                self.out.rounds = self.out.rounds.max(rounds);
                Ok(())
            }
            Strategy::Open => match self.goal {
                Some(g) if g(st) || self.clash.is_some() || self.det.first(st).is_some() => {
                    self.out.open += 1;
                    self.out.rounds = self.out.rounds.max(rounds);
                    Ok(())
                }
                Some(_) => Err(self.fail(format!("open leaf at {} misses the goal", st.sequent()))),
                None => Err(self.fail("open leaf in a complete strategy".into())),
            },
            Strategy::Ask(q, on0, on1) => {
                self.det.admit(*q).map_err(|e| self.fail(e.to_string()))?;
                if let Some(b) = st.get(*q) {
                    self.path.push(b);
                    self.walk(if b { on1 } else { on0 }, st, rounds)?;
                    self.path.pop();
                    return Ok(());
                }
                for (b, child) in [(false, on0), (true, on1)] {
                    st.assign(*q, b);
                    self.path.push(b);
                    let r = self.walk(child, st, rounds + 1);
                    self.path.pop();
                    st.undo();
                    r?;
                }
                Ok(())
            }
        }
    }
}

fn run(
    s: &Strategy,
    initial: &[(Query, bool)],
    e: &ExtAxiomSet,
    sys: System,
    goal: Option<&dyn Fn(&GameState) -> bool>,
) -> Result<Verified> {
    let mut det = Detector::new(e, sys);
    for &(q, _) in initial {
        det.admit(q)?;
    }
    let (mut st, clash) = GameState::from_pairs(initial);
    let mut v = Verifier { det, clash, goal, out: Verified::default(), path: Vec::new() };
    v.walk(s, &mut st, 0)?;
    Ok(v.out)
}

/// Checks that `s` wins from `initial`, re-detecting every claimed leaf.
pub fn verify_strategy(s: &Strategy, initial: &[(Query, bool)], e: &ExtAxiomSet, sys: System) -> Result<Verified> {
    run(s, initial, e, sys, None)
}

/// Like [`verify_strategy`], but Open leaves pass when their state meets
/// `goal` or is already contradictory.
pub fn verify_partial(
    s: &Strategy,
    initial: &[(Query, bool)],
    e: &ExtAxiomSet,
    sys: System,
    goal: &dyn Fn(&GameState) -> bool,
) -> Result<Verified> {
    run(s, initial, e, sys, Some(goal))
}

/// A strategy together with the game it is played in.
#[derive(Clone, Debug)]
pub struct StrategyFile {
    pub system: System,
    pub axioms: ExtAxiomSet,
    pub initial: Vec<(Query, bool)>,
    pub strategy: Strategy,
    /// The header's axiom value when it was a file reference.
    pub axioms_ref: Option<String>,
}

fn shape(msg: impl Into<String>) -> GameError {
    GameError::Shape(msg.into())
}

impl StrategyFile {
    pub fn new(system: System, axioms: ExtAxiomSet, initial: Vec<(Query, bool)>, strategy: Strategy) -> StrategyFile {
        StrategyFile { system, axioms, initial, strategy, axioms_ref: None }
    }

    pub fn verify(&self) -> Result<Verified> {
        verify_strategy(&self.strategy, &self.initial, &self.axioms, self.system)
    }

    fn namer(&self) -> Namer {
        let mut fs: Vec<_> = self.initial.iter().flat_map(|(q, _)| q.leaves()).collect();
        fs.extend(self.strategy.queries().into_iter().flat_map(|q| q.leaves()));
        file_namer(&self.axioms, fs)
    }

    pub fn to_json(&self) -> Value {
        let mut names = self.namer();
        let axioms = match &self.axioms_ref {
            Some(r) => r.clone(),
            None => render_axioms(&self.axioms, &mut names),
        };
        let initial: Vec<Value> =
            self.initial.iter().map(|&(q, b)| json!({"q": render_query(q, &mut names), "b": b as u8})).collect();
        let mut o = Map::new();
        o.insert("system".into(), json!(self.system.name()));
        o.insert("axioms".into(), json!(axioms));
        o.insert("initial".into(), Value::Array(initial));
        o.insert("strategy".into(), node_json(&self.strategy, &mut names));
        Value::Object(o)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    /// Parses a strategy file; axiom references resolve against `base`.
    pub fn from_json(text: &str, base: Option<&Path>) -> Result<StrategyFile> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let v = Value::deserialize(&mut de)?;
        let o = v.as_object().ok_or_else(|| shape("expected a JSON object"))?;
        let system: System = o
            .get("system")
            .and_then(Value::as_str)
            .ok_or_else(|| shape("missing system"))?
            .parse()
            .map_err(shape)?;
        let (axioms, axioms_ref) = match o.get("axioms").and_then(Value::as_str) {
            None => (ExtAxiomSet::new(), None),
            Some(a) => {
                let set = load_axioms_value(a, base).map_err(|e| shape(format!("axioms: {e}")))?;
                let r = (!a.contains(":=") && !a.contains('\n') && !a.trim().is_empty()).then(|| a.to_string());
                (set, r)
            }
        };
        let mut initial = Vec::new();
        for (k, item) in o.get("initial").and_then(Value::as_array).into_iter().flatten().enumerate() {
            let q = item.get("q").and_then(Value::as_str).ok_or_else(|| shape(format!("initial {k}: missing q")))?;
            let b = item.get("b").and_then(Value::as_u64).ok_or_else(|| shape(format!("initial {k}: missing b")))?;
            if b > 1 {
                return Err(shape(format!("initial {k}: b must be 0 or 1")));
            }
            initial.push((parse_query(q)?, b == 1));
        }
        let strategy = node_from_json(o.get("strategy").ok_or_else(|| shape("missing strategy"))?, "")?;
        Ok(StrategyFile { system, axioms, initial, strategy, axioms_ref })
    }
}

fn node_json(s: &Strategy, names: &mut Namer) -> Value {
    match s {
        Strategy::Leaf(k) => json!({"leaf": {"kind": k.name()}}),
        Strategy::Open => json!({"open": {}}),
        Strategy::Ask(q, a, b) => {
            let mut o = Map::new();
            o.insert("q".into(), json!(render_query(*q, names)));
            o.insert("0".into(), node_json(a, names));
            o.insert("1".into(), node_json(b, names));
            Value::Object(o)
        }
    }
}

fn node_from_json(v: &Value, at: &str) -> Result<Strategy> {
    let o = v.as_object().ok_or_else(|| shape(format!("node [{at}] is not an object")))?;
    if let Some(l) = o.get("leaf") {
        let k = l.get("kind").and_then(Value::as_str).ok_or_else(|| shape(format!("leaf [{at}]: missing kind")))?;
        return Ok(Strategy::Leaf(k.parse().map_err(shape)?));
    }
    if o.contains_key("open") {
        return Ok(Strategy::Open);
    }
    let q = o.get("q").and_then(Value::as_str).ok_or_else(|| shape(format!("node [{at}]: missing q")))?;
    let sub = |b: &str| -> Result<Strategy> {
        let child = o.get(b).ok_or_else(|| shape(format!("node [{at}]: missing child {b}")))?;
        let p = if at.is_empty() { b.to_string() } else { format!("{at}.{b}") };
        node_from_json(child, &p)
    };
    Ok(Strategy::ask(parse_query(q)?, sub("0")?, sub("1")?))
}
