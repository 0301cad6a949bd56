//! Strategy combinators, written in continuation-passing style: each
//! combinator asks its queries and hands the extended state to a
//! continuation, and every branch where Adversary's answers clash ends in
//! a leaf.

use super::state::{Detector, GameState};
use super::strategy::Strategy;
use super::{GameError, Result, System};
use crate::calculus::{check_proof, Mode, Proof, SystemId};
use crate::syntax::{ExtAxiomSet, Formula, Node, Query, Sequent};

/// Continuation receiving an answer bit.
pub type Cont<'c, 'a> = &'c mut dyn FnMut(&mut Play<'a>, bool) -> Result<Strategy>;
/// Continuation receiving the query a search ended on.
pub type QCont<'c, 'a> = &'c mut dyn FnMut(&mut Play<'a>, Query) -> Result<Strategy>;

/// A game in progress, as seen by a strategy under construction.
pub struct Play<'a> {
    pub det: Detector<'a>,
    pub st: GameState,
}

fn stuck(msg: impl Into<String>) -> GameError {
    GameError::Stuck(msg.into())
}

fn left(s: &Sequent) -> Query {
    Query::big_and(&s.ante)
}

fn right(s: &Sequent) -> Query {
    Query::big_or(&s.succ)
}

/// `⋀Σ ⊃ ⋁Π`.
pub(crate) fn seq_query(s: &Sequent) -> Query {
    Query::implies(left(s), right(s))
}

impl<'a> Play<'a> {
    pub fn new(e: &'a ExtAxiomSet, sys: System, initial: &[(Query, bool)]) -> Result<Play<'a>> {
        let mut det = Detector::new(e, sys);
        for &(q, _) in initial {
            det.admit(q)?;
        }
        let (st, _) = GameState::from_pairs(initial);
        Ok(Play { det, st })
    }

    /// Runs `body` unless the state is already contradictory.
    pub fn guarded(&mut self, initial: &[(Query, bool)], body: impl FnOnce(&mut Play<'a>) -> Result<Strategy>) -> Result<Strategy> {
        if let (_, Some(c)) = GameState::from_pairs(initial) {
            return Ok(Strategy::Leaf(c.kind));
        }
        if let Some(c) = self.det.first(&self.st) {
            return Ok(Strategy::Leaf(c.kind));
        }
        body(self)
    }

    /// Asks `q` and continues with the answer; answered queries are not
    /// asked again.
    pub fn ask(&mut self, q: Query, k: Cont<'_, 'a>) -> Result<Strategy> {
        if let Some(b) = self.st.get(q) {
            return k(self, b);
        }
        self.det.admit(q)?;
        let mut kids = [Strategy::Open, Strategy::Open];
        for b in [false, true] {
            self.st.assign(q, b);
            let r = match self.det.on_assign(&self.st, q) {
                Some(c) => Ok(Strategy::Leaf(c.kind)),
                None => k(self, b),
            };
            self.st.undo();
            kids[b as usize] = r?;
        }
        let [on0, on1] = kids;
        Ok(Strategy::ask(q, on0, on1))
    }

    /// From `⋀Γ ↦ 0`, finds `Q ∈ Γ` with `Q ↦ 0`.
    pub fn find_conj_false(&mut self, gamma: &[Query], k: QCont<'_, 'a>) -> Result<Strategy> {
        self.find(gamma, false, k)
    }

    /// From `⋁Δ ↦ 1`, finds `Q ∈ Δ` with `Q ↦ 1`.
    pub fn find_disj_true(&mut self, delta: &[Query], k: QCont<'_, 'a>) -> Result<Strategy> {
        self.find(delta, true, k)
    }

    fn find(&mut self, items: &[Query], want: bool, k: QCont<'_, 'a>) -> Result<Strategy> {
        match items.len() {
            0 => Err(stuck("search over an empty list")),
            1 => k(self, items[0]),
            n => {
                let (l, r) = items.split_at(n / 2);
                let big = |xs: &[Query]| if want { Query::big_or(xs) } else { Query::big_and(xs) };
                self.ask(big(l), &mut |p, b| {
                    if b == want {
                        p.find(l, want, k)
                    } else {
                        p.ask(big(r), &mut |p, c| if c == want { p.find(r, want, k) } else { Err(stuck("search step")) })
                    }
                })
            }
        }
    }

    /// From `⋀Γ ↦ 1`, forces `Γ[idx] ↦ 1`.
    pub fn force_conj(&mut self, gamma: &[Query], idx: usize, k: &mut dyn FnMut(&mut Play<'a>) -> Result<Strategy>) -> Result<Strategy> {
        self.force(gamma, idx, true, k)
    }

    /// From `⋁Δ ↦ 0`, forces `Δ[idx] ↦ 0`.
    pub fn force_disj(&mut self, delta: &[Query], idx: usize, k: &mut dyn FnMut(&mut Play<'a>) -> Result<Strategy>) -> Result<Strategy> {
        self.force(delta, idx, false, k)
    }

    fn force(&mut self, items: &[Query], idx: usize, val: bool, k: &mut dyn FnMut(&mut Play<'a>) -> Result<Strategy>) -> Result<Strategy> {
        if items.len() <= 1 {
            return k(self);
        }
        let h = items.len() / 2;
        let (part, i) = if idx < h { (&items[..h], idx) } else { (&items[h..], idx - h) };
        let q = if val { Query::big_and(part) } else { Query::big_or(part) };
        self.ask(q, &mut |p, b| if b == val { p.force(part, i, val, k) } else { Err(stuck("forcing step")) })
    }

    /// From `Q ⊃ R ↦ 0`, forces `Q ↦ 1` and `R ↦ 0`.
    pub fn force_impl(&mut self, q: Query, r: Query, k: &mut dyn FnMut(&mut Play<'a>) -> Result<Strategy>) -> Result<Strategy> {
        self.ask(q, &mut |p, b| {
            if !b {
                p.ask(Query::not(q), &mut |_, _| Err(stuck("implication antecedent")))
            } else {
                p.ask(r, &mut |p, c| if c { Err(stuck("implication consequent")) } else { k(p) })
            }
        })
    }

    /// From `⋀Σ ⊃ ⋁Π ↦ 1`, finds `Q ∈ Σ` with `Q ↦ 0` (reported with
    /// `true`) or `Q ∈ Π` with `Q ↦ 1`.
    pub fn find_witness(&mut self, s: &Sequent, k: &mut dyn FnMut(&mut Play<'a>, bool, Query) -> Result<Strategy>) -> Result<Strategy> {
        let (l, r) = (left(s), right(s));
        self.ask(Query::not(l), &mut |p, b| {
            if b {
                p.ask(l, &mut |p, c| {
                    if c {
                        Err(stuck("witness negation"))
                    } else {
                        p.find_conj_false(&s.ante, &mut |p, q| k(p, true, q))
                    }
                })
            } else {
                p.ask(r, &mut |p, c| {
                    if c {
                        p.find_disj_true(&s.succ, &mut |p, q| k(p, false, q))
                    } else {
                        Err(stuck("witness disjunction"))
                    }
                })
            }
        })
    }

    /// Forces a member of the conclusion `Σ |- Π` (after `⋀Σ ↦ 1`,
    /// `⋁Π ↦ 0`) to its side's value.
    fn force_member(&mut self, concl: &Sequent, on_left: bool, q: Query, k: &mut dyn FnMut(&mut Play<'a>) -> Result<Strategy>) -> Result<Strategy> {
        let side = if on_left { &concl.ante } else { &concl.succ };
        match side.iter().position(|&x| x == q) {
            Some(i) if on_left => self.force_conj(side, i, k),
            Some(i) => self.force_disj(side, i, k),
            None => k(self),
        }
    }

    /// From `⋀Σ ⊃ ⋁Π ↦ 0` and every premise query `↦ 1`, a strategy
    /// reaching a simple contradiction.
    pub fn local(&mut self, concl: &Sequent, prems: &[Sequent]) -> Result<Strategy> {
        let plan = Plan::new(concl, prems);
        self.force_impl(left(concl), right(concl), &mut |p| p.run(&plan, 0))
    }

    fn run(&mut self, plan: &Plan, i: usize) -> Result<Strategy> {
        let Some(step) = plan.steps.get(i) else {
            return Err(stuck(format!("local soundness of {} ran out of steps", plan.concl)));
        };
        match step {
            Step::Witness(j) => self.find_witness(&plan.prems[*j], &mut |p, on_left, q| {
                if (if on_left { &plan.concl.ante } else { &plan.concl.succ }).contains(&q) {
                    p.force_member(&plan.concl, on_left, q, &mut |p| p.run(plan, i + 1))
                } else {
                    p.run(plan, i + 1)
                }
            }),
            Step::Force(on_left, q) => self.force_member(&plan.concl, *on_left, *q, &mut |p| p.run(plan, i + 1)),
            Step::Ask(q) => self.ask(*q, &mut |p, _| p.run(plan, i + 1)),
        }
    }
}

enum Step {
    Witness(usize),
    Force(bool, Query),
    Ask(Query),
}

struct Plan {
    concl: Sequent,
    prems: Vec<Sequent>,
    steps: Vec<Step>,
}

impl Plan {
    fn new(concl: &Sequent, prems: &[Sequent]) -> Plan {
        let mut steps: Vec<Step> = (0..prems.len()).map(Step::Witness).collect();
        let mut principal = Vec::new();
        for (on_left, side) in [(true, &concl.ante), (false, &concl.succ)] {
            for &q in side {
                let missing = prems.is_empty()
                    || prems.iter().any(|s| !(if on_left { &s.ante } else { &s.succ }).contains(&q));
                if missing && !principal.contains(&(on_left, q)) {
                    principal.push((on_left, q));
                }
            }
        }
        for &(on_left, q) in &principal {
            steps.push(Step::Force(on_left, q));
        }
        for &(_, q) in &principal {
            if let Some(Node::Dec(_, v, _)) = q.as_base().map(Formula::node) {
                steps.push(Step::Ask(Query::base(Formula::var(v))));
            }
        }
        Plan { concl: concl.clone(), prems: prems.to_vec(), steps }
    }
}

/// A winning strategy from `{⋀Σ⊃⋁Π ↦ 0, ⋀Σᵢ⊃⋁Πᵢ ↦ 1}` for one inference.
pub fn local_soundness(concl: &Sequent, prems: &[Sequent], e: &ExtAxiomSet, sys: System) -> Result<Strategy> {
    let initial = local_initial(concl, prems);
    let mut p = Play::new(e, sys, &initial)?;
    p.guarded(&initial, |p| p.local(concl, prems))
}

/// The initial state of [`local_soundness`].
pub fn local_initial(concl: &Sequent, prems: &[Sequent]) -> Vec<(Query, bool)> {
    let mut v = vec![(seq_query(concl), false)];
    v.extend(prems.iter().map(|s| (seq_query(s), true)));
    v
}

/// What a [`strat_find_force`] partial strategy achieves.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Goal {
    /// From `⋁items ↦ 1`: some item `↦ 1`.
    FindDisjunctTrue,
    /// From `⋀items ↦ 0`: some item `↦ 0`.
    FindConjunctFalse,
    /// From `⋀items ↦ 1`: `items[target] ↦ 1`.
    ForceConjunct,
    /// From `⋁items ↦ 0`: `items[target] ↦ 0`.
    ForceDisjunct,
    /// From `items[0] ⊃ items[1] ↦ 0`: `items[0] ↦ 1` and `items[1] ↦ 0`.
    ForceImplicationParts,
}

impl Goal {
    /// The driving assignment the goal starts from.
    pub fn driver(self, items: &[Query]) -> Result<(Query, bool)> {
        Ok(match self {
            Goal::FindDisjunctTrue => (Query::big_or(items), true),
            Goal::FindConjunctFalse => (Query::big_and(items), false),
            Goal::ForceConjunct => (Query::big_and(items), true),
            Goal::ForceDisjunct => (Query::big_or(items), false),
            Goal::ForceImplicationParts => match items {
                [q, r] => (Query::implies(*q, *r), false),
                _ => return Err(GameError::Input("implication needs exactly two parts".into())),
            },
        })
    }

    /// Whether a state reached the goal.
    pub fn reached(self, items: &[Query], target: usize, st: &GameState) -> bool {
        match self {
            Goal::FindDisjunctTrue => items.iter().any(|&q| st.get(q) == Some(true)),
            Goal::FindConjunctFalse => items.iter().any(|&q| st.get(q) == Some(false)),
            Goal::ForceConjunct => st.get(items[target]) == Some(true),
            Goal::ForceDisjunct => st.get(items[target]) == Some(false),
            Goal::ForceImplicationParts => st.get(items[0]) == Some(true) && st.get(items[1]) == Some(false),
        }
    }
}

/// A partial strategy with Open leaves where the goal holds. The driving
/// assignment is added to `initial` when missing.
pub fn strat_find_force(
    goal: Goal,
    items: &[Query],
    target: usize,
    initial: &[(Query, bool)],
    e: &ExtAxiomSet,
    sys: System,
) -> Result<Strategy> {
    if items.is_empty() || (matches!(goal, Goal::ForceConjunct | Goal::ForceDisjunct) && target >= items.len()) {
        return Err(GameError::Input("malformed driver".into()));
    }
    let driver = goal.driver(items)?;
    let mut init = initial.to_vec();
    if !init.iter().any(|&(q, _)| q == driver.0) {
        init.push(driver);
    }
    let mut p = Play::new(e, sys, &init)?;
    p.guarded(&init, |p| match goal {
        Goal::FindDisjunctTrue => p.find_disj_true(items, &mut |_, _| Ok(Strategy::Open)),
        Goal::FindConjunctFalse => p.find_conj_false(items, &mut |_, _| Ok(Strategy::Open)),
        Goal::ForceConjunct => p.force_conj(items, target, &mut |_| Ok(Strategy::Open)),
        Goal::ForceDisjunct => p.force_disj(items, target, &mut |_| Ok(Strategy::Open)),
        Goal::ForceImplicationParts => p.force_impl(items[0], items[1], &mut |_| Ok(Strategy::Open)),
    })
}

/// Which game a proof system's formulas live in.
fn game_of(sys: SystemId) -> Option<System> {
    match sys {
        SystemId::Ldt | SystemId::ELdt => Some(System::DB),
        SystemId::Lndt | SystemId::ELndt => Some(System::NB),
        _ => None,
    }
}

/// A winning strategy from `{Γ ↦ 1, Δ ↦ 0}` for the conclusion `Γ |- Δ`
/// of an eLDT or eLNDT proof, in the matching game.
pub fn proof_to_strategy(p: &Proof, sys: SystemId) -> Result<Strategy> {
    let game = game_of(sys).ok_or_else(|| GameError::Input(format!("no game for proofs in {}", sys.name())))?;
    check_proof(p, sys, Mode::Multiset).map_err(|e| GameError::Input(format!("proof fails to check at line {}: {}", e.id, e.kind)))?;
    let concl = p.conclusion().ok_or_else(|| GameError::Input("empty proof".into()))?.clone();
    let index: std::collections::HashMap<usize, usize> = p.lines.iter().enumerate().map(|(i, l)| (l.id, i)).collect();
    let qs: Vec<Query> = p.lines.iter().map(|l| seq_query(&l.seq)).collect();
    let initial = initial_of(&concl);
    let mut play = Play::new(&p.axioms, game, &initial)?;
    let n = qs.len();
    let search = Search { p, qs: &qs, index: &index };
    play.guarded(&initial, |pl| {
        pl.ask(left(&concl), &mut |pl, b| {
            if !b {
                return pl.find_conj_false(&concl.ante, &mut |_, _| Err(stuck("conclusion antecedent")));
            }
            pl.ask(right(&concl), &mut |pl, c| {
                if c {
                    return pl.find_disj_true(&concl.succ, &mut |_, _| Err(stuck("conclusion succedent")));
                }
                pl.ask(qs[n - 1], &mut |pl, d| {
                    if d {
                        return pl.ask(Query::not(left(&concl)), &mut |_, _| Err(stuck("last line")));
                    }
                    pl.ask(Query::big_and(&qs), &mut |pl, all| {
                        if all {
                            pl.force_conj(&qs, n - 1, &mut |_| Err(stuck("prefix")))
                        } else {
                            search.bisect(pl, 0, n)
                        }
                    })
                })
            })
        })
    })
}

/// `{Γ ↦ 1, Δ ↦ 0}`.
pub(crate) fn initial_of(s: &Sequent) -> Vec<(Query, bool)> {
    s.ante.iter().map(|&q| (q, true)).chain(s.succ.iter().map(|&q| (q, false))).collect()
}

struct Search<'p> {
    p: &'p Proof,
    qs: &'p [Query],
    index: &'p std::collections::HashMap<usize, usize>,
}

impl Search<'_> {
    /// `⋀qs[..l] ↦ 1` (vacuous for `l = 0`) and `⋀qs[..u] ↦ 0`.
    fn bisect(&self, pl: &mut Play, l: usize, u: usize) -> Result<Strategy> {
        if u - l <= 1 {
            return self.settle(pl, l, u);
        }
        let m = (l + u) / 2;
        pl.ask(Query::big_and(&self.qs[..m]), &mut |pl, b| if b { self.bisect(pl, m, u) } else { self.bisect(pl, l, m) })
    }

    fn settle(&self, pl: &mut Play, l: usize, u: usize) -> Result<Strategy> {
        pl.find_conj_false(&self.qs[..u], &mut |pl, q| {
            let j = self.qs[..u].iter().position(|&x| x == q).expect("member");
            if j + 1 == u || self.qs[j] == self.qs[l] {
                self.dispatch(pl, l)
            } else {
                pl.force_conj(&self.qs[..l], j, &mut |_| Err(stuck("earlier line")))
            }
        })
    }

    /// `⋀qs[..i] ↦ 1`, `qs[i] ↦ 0`: forces each premise true, then plays
    /// local soundness.
    fn dispatch(&self, pl: &mut Play, i: usize) -> Result<Strategy> {
        let line = &self.p.lines[i];
        let prem: Vec<usize> = line.prem.iter().map(|id| self.index[id]).collect();
        self.premises(pl, i, &prem, 0)
    }

    fn premises(&self, pl: &mut Play, i: usize, prem: &[usize], k: usize) -> Result<Strategy> {
        if k == prem.len() {
            let prems: Vec<Sequent> = prem.iter().map(|&j| self.p.lines[j].seq.clone()).collect();
            let plan = Plan::new(&self.p.lines[i].seq, &prems);
            let concl = &self.p.lines[i].seq;
            return pl.force_impl(left(concl), right(concl), &mut |pl| pl.run(&plan, 0));
        }
        pl.force_conj(&self.qs[..i], prem[k], &mut |pl| self.premises(pl, i, prem, k + 1))
    }
}
