use std::fmt;

use super::state::{Detector, GameState, Kind};
use super::strategy::Strategy;
use super::{path_string, GameError, Result, System};
use crate::syntax::{render_query, ExtAxiomSet, Query, VarNames};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Event {
    Ask(Query),
    Answer(bool),
    Win(Kind),
    Fail(String),
}

/// The moves of one play, in order.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub events: Vec<Event>,
}

impl Transcript {
    pub fn won(&self) -> Option<Kind> {
        match self.events.last() {
            Some(Event::Win(k)) => Some(*k),
            _ => None,
        }
    }

    pub fn rounds(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Answer(_))).count()
    }

    /// Line-oriented form: `ASK <query>`, `ANS 0|1`, `WIN <kind>`, `FAIL <reason>`.
    pub fn render(&self, names: &mut dyn VarNames) -> String {
        let mut out = String::new();
        for e in &self.events {
            let line = match e {
                Event::Ask(q) => format!("ASK {}", render_query(*q, names)),
                Event::Answer(b) => format!("ANS {}", *b as u8),
                Event::Win(k) => format!("WIN {k}"),
                Event::Fail(m) => format!("FAIL {m}"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&mut crate::syntax::PlainNames))
    }
}

/// Plays `strategy` against `adversary`. Queries already answered are not
/// put to the adversary again. Play stops at the first simple contradiction,
/// or with `FAIL` when the strategy runs out without one.
pub fn play(
    initial: &[(Query, bool)],
    e: &ExtAxiomSet,
    sys: System,
    strategy: &Strategy,
    adversary: &mut dyn FnMut(Query) -> Result<bool>,
) -> Result<Transcript> {
    let mut det = Detector::new(e, sys);
    for &(q, _) in initial {
        det.admit(q)?;
    }
    let (mut st, clash) = GameState::from_pairs(initial);
    let mut t = Transcript::default();
    if let Some(c) = clash.or_else(|| det.first(&st)) {
        t.events.push(Event::Win(c.kind));
        return Ok(t);
    }
    let mut node = strategy;
    let mut path = Vec::new();
    loop {
        match node {
            Strategy::Ask(q, on0, on1) => {
                det.admit(*q)?;
                let b = match st.get(*q) {
                    Some(b) => b,
                    None => {
                        t.events.push(Event::Ask(*q));
                        let b = adversary(*q)?;
                        t.events.push(Event::Answer(b));
                        st.assign(*q, b);
                        if let Some(c) = det.on_assign(&st, *q) {
                            t.events.push(Event::Win(c.kind));
                            return Ok(t);
                        }
                        b
                    }
                };
                path.push(b);
                node = if b { on1 } else { on0 };
            }
            Strategy::Leaf(k) => {
                let msg = match det.first(&st) {
                    Some(c) => format!("claimed {k} but found {}", c.kind),
                    None => format!("claimed {k} at [{}] with no contradiction", path_string(&path)),
                };
                t.events.push(Event::Fail(msg));
                return Ok(t);
            }
            Strategy::Open => {
                t.events.push(Event::Fail(format!("open leaf at [{}]", path_string(&path))));
                return Ok(t);
            }
        }
    }
}

/// An adversary answering from a fixed list, then failing.
pub fn scripted(answers: &[bool]) -> impl FnMut(Query) -> Result<bool> + '_ {
    let mut it = answers.iter();
    move |q| it.next().copied().ok_or_else(|| GameError::Input(format!("no scripted answer left for {q}")))
}
