//! De Morgan normal form for NB strategies.
//!
//! A DM query has negations only directly above base formulas. Paths into
//! queries are child indices, `0` for the left (or only) child.

use super::build::Play;
use super::state::{GameState, Kind};
use super::strategy::{query_metrics, Strategy};
use super::{GameError, Result, System};
use crate::syntax::{ExtAxiomSet, Formula, QNode, Query};

/// `dm(Q)` when `pos`, `dm(¬Q)` otherwise.
pub fn dm_signed(q: Query, pos: bool) -> Query {
    match q.node() {
        QNode::Base(_) => {
            if pos { q } else { Query::not(q) }
        }
        QNode::Not(a) => dm_signed(a, !pos),
        QNode::Or(a, b) => {
            let (x, y) = (dm_signed(a, pos), dm_signed(b, pos));
            if pos { Query::or(x, y) } else { Query::and(x, y) }
        }
        QNode::And(a, b) => {
            let (x, y) = (dm_signed(a, pos), dm_signed(b, pos));
            if pos { Query::and(x, y) } else { Query::or(x, y) }
        }
    }
}

pub fn dm_query(q: Query) -> Query {
    dm_signed(q, true)
}

pub fn sub_at(q: Query, path: &[u8]) -> Option<Query> {
    let Some((&s, rest)) = path.split_first() else { return Some(q) };
    let c = match (q.node(), s) {
        (QNode::Not(a), 0) => a,
        (QNode::Or(a, _) | QNode::And(a, _), 0) => a,
        (QNode::Or(_, b) | QNode::And(_, b), 1) => b,
        _ => return None,
    };
    sub_at(c, rest)
}

pub fn replace_at(q: Query, path: &[u8], r: Query) -> Option<Query> {
    let Some((&s, rest)) = path.split_first() else { return Some(r) };
    Some(match (q.node(), s) {
        (QNode::Not(a), 0) => Query::not(replace_at(a, rest, r)?),
        (QNode::Or(a, b), 0) => Query::or(replace_at(a, rest, r)?, b),
        (QNode::Or(a, b), 1) => Query::or(a, replace_at(b, rest, r)?),
        (QNode::And(a, b), 0) => Query::and(replace_at(a, rest, r)?, b),
        (QNode::And(a, b), 1) => Query::and(a, replace_at(b, rest, r)?),
        _ => return None,
    })
}

/// The path in `dm_signed(q, pos)` of the position `path` of `q`, and the
/// sign under which the subquery there is translated.
pub fn dm_hole(q: Query, path: &[u8], pos: bool) -> Option<(Vec<u8>, bool)> {
    let mut out = Vec::new();
    let mut sign = pos;
    let mut cur = q;
    for &s in path {
        cur = match (cur.node(), s) {
            (QNode::Not(a), 0) => {
                sign = !sign;
                a
            }
            (QNode::Or(a, _) | QNode::And(a, _), 0) => {
                out.push(0);
                a
            }
            (QNode::Or(_, b) | QNode::And(_, b), 1) => {
                out.push(1);
                b
            }
            _ => return None,
        };
    }
    Some((out, sign))
}

/// A subquery `R` with `⅓‖Q‖ ≤ ‖R‖ < ⅔‖Q‖`: the deepest such position,
/// leftmost among equals. Returns its path and the subquery.
pub fn spira_subtree(q: Query) -> Result<(Vec<u8>, Query)> {
    let total = query_metrics(q).leafcount;
    if total < 2 {
        return Err(GameError::Input(format!("‖{q}‖ = {total} is below 2")));
    }
    let mut best: Option<(Vec<u8>, Query)> = None;
    let mut stack: Vec<(Query, Vec<u8>)> = vec![(q, vec![])];
    while let Some((r, path)) = stack.pop() {
        let size = query_metrics(r).leafcount;
        if 3 * size >= total && 3 * size < 2 * total {
            let better = match &best {
                None => true,
                Some((bp, _)) => path.len() > bp.len() || (path.len() == bp.len() && path < *bp),
            };
            if better {
                best = Some((path.clone(), r));
            }
        }
        let kids: Vec<(u8, Query)> = match r.node() {
            QNode::Base(_) => vec![],
            QNode::Not(a) => vec![(0, a)],
            QNode::Or(a, b) | QNode::And(a, b) => vec![(0, a), (1, b)],
        };
        for (s, c) in kids {
            let mut p = path.clone();
            p.push(s);
            stack.push((c, p));
        }
    }
    best.ok_or_else(|| GameError::Stuck(format!("no Spira subtree in {q}")))
}

fn stuck(msg: &str) -> GameError {
    GameError::Stuck(msg.into())
}

impl Play<'_> {
    /// From `{P ↦ v, P' ↦ v, C[P] ↦ x, C[P'] ↦ 1−x}` where `ctx = C[P]` has
    /// `P` at `path`.
    pub fn leibniz(&mut self, ctx: Query, path: &[u8], p2: Query) -> Result<Strategy> {
        match path.len() {
            0 => Err(stuck("empty Leibniz context")),
            1 => {
                let t = sub_at(ctx, &[1 - path[0]]).ok_or_else(|| stuck("Leibniz sibling"))?;
                self.ask(t, &mut |_, _| Err(stuck("Leibniz base")))
            }
            n => {
                let (outer, inner) = path.split_at(n / 2);
                let s = sub_at(ctx, outer).ok_or_else(|| stuck("Leibniz path"))?;
                let s2 = replace_at(s, inner, p2).ok_or_else(|| stuck("Leibniz path"))?;
                self.ask(s, &mut |pl, a| {
                    pl.ask(s2, &mut |pl, b| if a != b { pl.leibniz(s, inner, p2) } else { pl.leibniz(ctx, outer, s2) })
                })
            }
        }
    }

    /// From `{dm(Q) ↦ b, dm(¬Q) ↦ b}`.
    pub fn duality(&mut self, q: Query, b: bool) -> Result<Strategy> {
        if let QNode::Not(a) = q.node() {
            return self.duality(a, b);
        }
        if query_metrics(q).leafcount <= 3 {
            return self.duality_linear(q, b);
        }
        let (path, r) = spira_subtree(q)?;
        let (rp, rn) = (dm_signed(r, true), dm_signed(r, false));
        self.ask(rp, &mut |pl, c| {
            pl.ask(rn, &mut |pl, c2| {
                if c == c2 {
                    return pl.duality(r, c);
                }
                let q2 = replace_at(q, &path, Query::base(Formula::constant(c))).expect("path from spira");
                let (qp, qn) = (dm_signed(q2, true), dm_signed(q2, false));
                pl.ask(qp, &mut |pl, d| {
                    if d != b {
                        return pl.swap_leibniz(q, &path, c, true);
                    }
                    pl.ask(qn, &mut |pl, d2| if d2 != b { pl.swap_leibniz(q, &path, c, false) } else { pl.duality(q2, b) })
                })
            })
        })
    }

    /// With `dm(R) ↦ c`, `dm(¬R) ↦ 1−c` and the two signed translations of
    /// `Q` and `Q[R:=c]` disagreeing, establishes the constant and closes by
    /// Leibniz.
    fn swap_leibniz(&mut self, q: Query, path: &[u8], c: bool, pos: bool) -> Result<Strategy> {
        let (hole, sign) = dm_hole(q, path, pos).ok_or_else(|| stuck("hole"))?;
        let ctx = dm_signed(q, pos);
        let cq = Query::base(Formula::constant(c));
        let p2 = if sign { cq } else { Query::not(cq) };
        self.ask(cq, &mut |pl, x| {
            if x != c {
                return Err(stuck("constant"));
            }
            if sign {
                pl.leibniz(ctx, &hole, p2)
            } else {
                pl.ask(p2, &mut |pl, _| pl.leibniz(ctx, &hole, p2))
            }
        })
    }

    fn duality_linear(&mut self, q: Query, b: bool) -> Result<Strategy> {
        let (a, c, or) = match q.node() {
            QNode::Base(_) => return Err(stuck("base duality")),
            QNode::Not(a) => return self.duality_linear(a, b),
            QNode::Or(a, c) => (a, c, true),
            QNode::And(a, c) => (a, c, false),
        };
        // `dm(Q)` is an ∨ when `or`; `dm(¬Q)` is the dual junction. The side
        // whose value `b` is not absorbing for it names a child to find.
        let absorb_pos = or;
        let (find_pos, x, y) = if b == absorb_pos { (true, a, c) } else { (false, a, c) };
        let first = dm_signed(x, find_pos);
        self.ask(first, &mut |pl, v| {
            if v == b {
                let other = dm_signed(x, !find_pos);
                pl.ask(other, &mut |pl, w| if w == b { pl.duality(x, b) } else { Err(stuck("dual child")) })
            } else {
                pl.ask(dm_signed(y, find_pos), &mut |pl, w| {
                    if w != b {
                        return Err(stuck("junction"));
                    }
                    pl.ask(dm_signed(y, !find_pos), &mut |pl, z| if z == b { pl.duality(y, b) } else { Err(stuck("dual child")) })
                })
            }
        })
    }
}

/// NB strategy from `{dm(Q) ↦ b, dm(¬Q) ↦ b}`.
pub fn duality_strategy(q: Query, b: bool, e: &ExtAxiomSet) -> Result<Strategy> {
    let initial = [(dm_signed(q, true), b), (dm_signed(q, false), b)];
    let mut pl = Play::new(e, System::NB, &initial)?;
    pl.guarded(&initial, |pl| pl.duality(q, b))
}

/// NB strategy from `{P ↦ v, P' ↦ v, C[P] ↦ c, C[P'] ↦ 1−c}`, where
/// `P` sits at `path` in `ctx = C[P]`.
pub fn leibniz_strategy(ctx: Query, path: &[u8], p2: Query, v: bool, c: bool, e: &ExtAxiomSet) -> Result<(Strategy, Vec<(Query, bool)>)> {
    let p = sub_at(ctx, path).ok_or_else(|| GameError::Input("path leaves the context".into()))?;
    let ctx2 = replace_at(ctx, path, p2).expect("same path");
    let initial = vec![(p, v), (p2, v), (ctx, c), (ctx2, !c)];
    let mut pl = Play::new(e, System::NB, &initial)?;
    let s = pl.guarded(&initial, |pl| pl.leibniz(ctx, path, p2))?;
    Ok((s, initial))
}

/// Replays an NB strategy on De Morgan translations of its queries, closing
/// the leaves whose contradiction was a negation of a compound query by the
/// duality strategy. The result wins from the translated initial state.
pub fn dm_strategy(s: &Strategy, initial: &[(Query, bool)], e: &ExtAxiomSet) -> Result<(Strategy, Vec<(Query, bool)>)> {
    let dm_init: Vec<(Query, bool)> = initial.iter().map(|&(q, b)| (dm_query(q), b)).collect();
    let (orig, clash) = GameState::from_pairs(initial);
    let mut pl = Play::new(e, System::NB, &dm_init)?;
    let mut w = DmWalk { orig, clash: clash.is_some() };
    let out = pl.guarded(&dm_init, |pl| w.walk(pl, s))?;
    Ok((out, dm_init))
}

struct DmWalk {
    orig: GameState,
    clash: bool,
}

impl DmWalk {
    fn walk(&mut self, pl: &mut Play, s: &Strategy) -> Result<Strategy> {
        match s {
            Strategy::Open => Ok(Strategy::Open),
            Strategy::Leaf(_) => self.close(pl),
            Strategy::Ask(q, on0, on1) => {
                if let Some(b) = self.orig.get(*q) {
                    return self.walk(pl, if b { on1 } else { on0 });
                }
                let q = *q;
                pl.ask(dm_query(q), &mut |pl, b| {
                    self.orig.assign(q, b);
                    let r = self.walk(pl, if b { on1 } else { on0 });
                    self.orig.undo();
                    r
                })
            }
        }
    }

    /// The DM state has no contradiction yet, so the original one pairs a
    /// compound query with its negation.
    fn close(&mut self, pl: &mut Play) -> Result<Strategy> {
        if self.clash {
            return Err(GameError::Stuck("clashing initial state".into()));
        }
        for (x, v) in self.orig.pairs() {
            if let QNode::Not(a) = x.node() {
                if self.orig.get(a) == Some(v) {
                    return pl.duality(a, v);
                }
            }
        }
        let kinds: Vec<Kind> = pl.det.detect_all(&self.orig).into_iter().map(|c| c.kind).collect();
        Err(GameError::Stuck(format!("leaf without a translatable contradiction (original kinds {kinds:?})")))
    }
}
