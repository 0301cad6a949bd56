use std::collections::HashMap;
use std::fmt;

use super::{Dir, Proof, ProofLine, Rule, SystemId};
use crate::syntax::class::classify_memo;
use crate::syntax::{Formula, FormulaClass, Node, QNode, Query, Sequent};

/// How cedents are compared.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mode {
    /// Lists; principal formulas at the right end, exchange is explicit.
    Strict,
    /// Multisets; principal formulas anywhere.
    #[default]
    Multiset,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "multiset" => Ok(Mode::Multiset),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineErrorKind {
    Arity { expected: usize, got: usize },
    Schema(String),
    Class(String),
    Dangling(usize),
    NonDag(usize),
    RuleNotInSystem(Rule),
    EmptyProof,
}

impl fmt::Display for LineErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineErrorKind::Arity { expected, got } => write!(f, "wrong arity: expected {expected} premises, got {got}"),
            LineErrorKind::Schema(s) => write!(f, "schema mismatch: {s}"),
            LineErrorKind::Class(s) => write!(f, "class violation: {s}"),
            LineErrorKind::Dangling(p) => write!(f, "dangling premise {p}"),
            LineErrorKind::NonDag(p) => write!(f, "premise {p} is not an earlier line"),
            LineErrorKind::RuleNotInSystem(r) => write!(f, "rule {r} not available"),
            LineErrorKind::EmptyProof => write!(f, "empty proof"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {id}: {kind}")]
pub struct LineError {
    pub id: usize,
    pub kind: LineErrorKind,
}

/// Checks every line; stops at the first failure.
pub fn check_proof(p: &Proof, sys: SystemId, mode: Mode) -> Result<(), LineError> {
    match Checker::new(p, sys, mode).run(true).into_iter().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Checks every line and collects all failures.
pub fn check_proof_all(p: &Proof, sys: SystemId, mode: Mode) -> Vec<LineError> {
    Checker::new(p, sys, mode).run(false)
}

struct Checker<'a> {
    p: &'a Proof,
    sys: SystemId,
    mode: Mode,
    classes: HashMap<Formula, FormulaClass>,
}

type R = Result<(), LineErrorKind>;

fn schema(msg: impl Into<String>) -> LineErrorKind {
    LineErrorKind::Schema(msg.into())
}

impl<'a> Checker<'a> {
    fn new(p: &'a Proof, sys: SystemId, mode: Mode) -> Checker<'a> {
        Checker { p, sys, mode, classes: HashMap::new() }
    }

    fn run(&mut self, first_only: bool) -> Vec<LineError> {
        let mut errs = Vec::new();
        if self.p.lines.is_empty() {
            errs.push(LineError { id: 0, kind: LineErrorKind::EmptyProof });
            return errs;
        }
        let mut pos: HashMap<usize, usize> = HashMap::new();
        for (i, l) in self.p.lines.iter().enumerate() {
            if let Err(kind) = self.line(l, i, &pos) {
                errs.push(LineError { id: l.id, kind });
                if first_only {
                    return errs;
                }
            }
            pos.entry(l.id).or_insert(i);
        }
        errs
    }

    fn line(&mut self, l: &ProofLine, i: usize, pos: &HashMap<usize, usize>) -> R {
        let mut prem = Vec::with_capacity(l.prem.len());
        for &q in &l.prem {
            match pos.get(&q) {
                Some(&j) if j < i => prem.push(&self.p.lines[j].seq),
                _ if self.p.lines.iter().any(|m| m.id == q) => return Err(LineErrorKind::NonDag(q)),
                _ => return Err(LineErrorKind::Dangling(q)),
            }
        }
        if !self.sys.allows(l.rule) {
            return Err(LineErrorKind::RuleNotInSystem(l.rule));
        }
        if prem.len() != l.rule.arity() {
            return Err(LineErrorKind::Arity { expected: l.rule.arity(), got: prem.len() });
        }
        for q in l.seq.queries() {
            self.query_class(q)?;
        }
        match self.mode {
            Mode::Multiset => self.multiset(l, &prem),
            Mode::Strict => self.strict(l, &prem),
        }
    }

    fn class(&mut self, f: Formula) -> Result<FormulaClass, LineErrorKind> {
        classify_memo(f, &self.p.axioms, &mut self.classes).map_err(|e| LineErrorKind::Class(e.to_string()))
    }

    fn query_class(&mut self, q: Query) -> R {
        use SystemId::*;
        match (self.sys, q.node()) {
            (LkELdt, QNode::Not(a)) => self.query_class(a),
            (LkELdt | LkPosELndt, QNode::Or(a, b) | QNode::And(a, b)) => {
                self.query_class(a)?;
                self.query_class(b)
            }
            (_, QNode::Base(f)) => {
                let c = self.class(f)?;
                let ok = match self.sys {
                    Ldt => c.is_dt(),
                    Lndt => c.is_ndt(),
                    ELdt | LkELdt => c.is_edt(),
                    ELndt | LkPosELndt => c.is_endt(),
                    CoELndt => c.is_coendt(),
                    ELEaDt => c.is_eafdt(),
                };
                if ok {
                    Ok(())
                } else {
                    Err(LineErrorKind::Class(format!("{f} is {} in {}", c.shape(), self.sys)))
                }
            }
            _ => Err(LineErrorKind::Class(format!("query {q} not admitted in {}", self.sys))),
        }
    }

    /// In e∃∀DT, ∧-rules only act on co-eNDT formulas.
    fn and_principal_ok(&mut self, q: Query) -> R {
        if self.sys == SystemId::ELEaDt {
            if let Some(f) = q.as_base() {
                if !self.class(f)?.is_coendt() {
                    return Err(LineErrorKind::Class(format!("∧-rule on non-co-eNDT formula {f}")));
                }
            }
        }
        Ok(())
    }

    fn ext_axiom(&self, l: &ProofLine) -> R {
        let s = &l.seq;
        if s.ante.len() != 1 || s.succ.len() != 1 {
            return Err(schema("extension axiom must be `e |- E` or `E |- e`"));
        }
        let (a, b) = (s.ante[0], s.succ[0]);
        let matches = |v_side: Query, d_side: Query| -> Option<crate::syntax::ExtVar> {
            let v = v_side.as_base()?.as_ext()?;
            let d = self.p.axioms.def(v)?;
            (d_side.as_base()? == d).then_some(v)
        };
        let lr = matches(a, b).map(|v| (v, Dir::Lr));
        let rl = matches(b, a).map(|v| (v, Dir::Rl));
        match l.aux.ext {
            Some(want) if lr == Some(want) || rl == Some(want) => Ok(()),
            Some((v, d)) => Err(schema(format!("not the {:?} axiom of {v}", d))),
            None if lr.is_some() || rl.is_some() => Ok(()),
            None => Err(schema("not an extension axiom")),
        }
    }

    fn multiset(&mut self, l: &ProofLine, prem: &[&Sequent]) -> R {
        let c = l.seq.normalized();
        let ps: Vec<Sequent> = prem.iter().map(|s| s.normalized()).collect();
        match l.rule {
            Rule::Id => {
                if c.ante.len() == 1 && c.ante == c.succ {
                    Ok(())
                } else {
                    Err(schema("id must be `A |- A`"))
                }
            }
            Rule::ZeroL => exact(&c, &[Query::base(Formula::zero())], &[], "0-l must be `0 |-`"),
            Rule::OneR => exact(&c, &[], &[Query::base(Formula::one())], "1-r must be `|- 1`"),
            Rule::Ext => self.ext_axiom(l),
            Rule::ExL | Rule::ExR => {
                if c == ps[0] {
                    Ok(())
                } else {
                    Err(schema("exchange changes the multiset"))
                }
            }
            Rule::WL => {
                if c.succ == ps[0].succ && ms_minus(&c.ante, &ps[0].ante).map(|d| d.len()) == Some(1) {
                    Ok(())
                } else {
                    Err(schema("w-l must add one antecedent formula"))
                }
            }
            Rule::WR => {
                if c.ante == ps[0].ante && ms_minus(&c.succ, &ps[0].succ).map(|d| d.len()) == Some(1) {
                    Ok(())
                } else {
                    Err(schema("w-r must add one succedent formula"))
                }
            }
            Rule::CL => match ms_minus(&ps[0].ante, &c.ante) {
                Some(d) if d.len() == 1 && c.ante.contains(&d[0]) && c.succ == ps[0].succ => Ok(()),
                _ => Err(schema("c-l must merge two antecedent copies")),
            },
            Rule::CR => match ms_minus(&ps[0].succ, &c.succ) {
                Some(d) if d.len() == 1 && c.succ.contains(&d[0]) && c.ante == ps[0].ante => Ok(()),
                _ => Err(schema("c-r must merge two succedent copies")),
            },
            Rule::ZeroR => side_add(&c, &ps[0], false, Query::base(Formula::zero()), "0-r"),
            Rule::OneL => side_add(&c, &ps[0], true, Query::base(Formula::one()), "1-l"),
            Rule::Cut => {
                if cut_ok(&c, &ps[0], &ps[1]) || cut_ok(&c, &ps[1], &ps[0]) {
                    Ok(())
                } else {
                    Err(schema("premises are not `Γ |- Δ, A` and `Γ, A |- Δ`"))
                }
            }
            _ => self.logical_multiset(l, &c, &ps),
        }
    }

    fn logical_multiset(&mut self, l: &ProofLine, c: &Sequent, ps: &[Sequent]) -> R {
        let left = matches!(l.rule, Rule::OrL | Rule::DecL | Rule::NotL | Rule::AndL);
        let written = if left { &l.seq.ante } else { &l.seq.succ };
        let cands: Vec<Query> = match l.aux.pos {
            Some(i) => match written.get(i) {
                Some(&q) => vec![q],
                None => return Err(schema(format!("principal position {i} out of range"))),
            },
            None => {
                let mut v = written.clone();
                v.sort();
                v.dedup();
                v
            }
        };
        let mut last = schema(format!("no principal formula for {}", l.rule));
        for q in cands {
            let Some(expect) = self.expected_premises(l, q)? else { continue };
            let side = if left { &c.ante } else { &c.succ };
            let Some(rest) = ms_minus(side, &[q]) else { continue };
            let ctx = if left {
                Sequent::new(rest, c.succ.clone())
            } else {
                Sequent::new(c.ante.clone(), rest)
            };
            let want: Vec<Sequent> = expect
                .iter()
                .map(|(a, s)| {
                    let mut t = ctx.clone();
                    t.ante.extend_from_slice(a);
                    t.succ.extend_from_slice(s);
                    t.normalized()
                })
                .collect();
            let ok = match want.len() {
                1 => want[0] == ps[0],
                _ => (want[0] == ps[0] && want[1] == ps[1]) || (want[0] == ps[1] && want[1] == ps[0]),
            };
            if ok {
                if matches!(l.rule, Rule::AndL | Rule::AndR) {
                    self.and_principal_ok(q)?;
                }
                return Ok(());
            }
            last = schema(format!("premises do not match {} on {q}", l.rule));
        }
        Err(last)
    }

    /// Formulas each premise adds to the context `(antecedent, succedent)`,
    /// or `None` when `q` has the wrong shape for the rule.
    #[allow(clippy::type_complexity)]
    fn expected_premises(&self, l: &ProofLine, q: Query) -> Result<Option<Vec<(Vec<Query>, Vec<Query>)>>, LineErrorKind> {
        let b = Query::base;
        Ok(match l.rule {
            Rule::OrL => q.split_or().map(|(x, y)| vec![(vec![x], vec![]), (vec![y], vec![])]),
            Rule::OrR => q.split_or().map(|(x, y)| vec![(vec![], vec![x, y])]),
            Rule::AndL => q.split_and().map(|(x, y)| vec![(vec![x, y], vec![])]),
            Rule::AndR => q.split_and().map(|(x, y)| vec![(vec![], vec![x]), (vec![], vec![y])]),
            Rule::NotL => match q.node() {
                QNode::Not(x) => Some(vec![(vec![], vec![x])]),
                _ => None,
            },
            Rule::NotR => match q.node() {
                QNode::Not(x) => Some(vec![(vec![x], vec![])]),
                _ => None,
            },
            Rule::DecL | Rule::DecR => match q.as_base().map(|f| f.node()) {
                Some(Node::Dec(x, p, y)) => {
                    if l.aux.var.is_some_and(|v| v != p) {
                        return Ok(None);
                    }
                    let pv = b(Formula::var(p));
                    if l.rule == Rule::DecL {
                        Some(vec![(vec![b(x)], vec![pv]), (vec![pv, b(y)], vec![])])
                    } else {
                        Some(vec![(vec![], vec![b(x), pv]), (vec![pv], vec![b(y)])])
                    }
                }
                _ => None,
            },
            _ => None,
        })
    }

    fn strict(&mut self, l: &ProofLine, prem: &[&Sequent]) -> R {
        let c = &l.seq;
        let b = Query::base;
        let eq = |s: &Sequent, a: &[Query], d: &[Query]| s.ante == a && s.succ == d;
        let cat = |x: &[Query], y: &[Query]| -> Vec<Query> { x.iter().chain(y).copied().collect() };
        let fail = |m: &str| Err(schema(m.to_string()));
        match l.rule {
            Rule::Id => {
                if c.ante.len() == 1 && c.ante == c.succ {
                    Ok(())
                } else {
                    fail("id must be `A |- A`")
                }
            }
            Rule::ZeroL => exact(c, &[b(Formula::zero())], &[], "0-l must be `0 |-`"),
            Rule::OneR => exact(c, &[], &[b(Formula::one())], "1-r must be `|- 1`"),
            Rule::Ext => self.ext_axiom(l),
            Rule::ExL | Rule::ExR => {
                let (pc, cc, other_p, other_c) = if l.rule == Rule::ExL {
                    (&prem[0].ante, &c.ante, &prem[0].succ, &c.succ)
                } else {
                    (&prem[0].succ, &c.succ, &prem[0].ante, &c.ante)
                };
                if other_p != other_c || pc.len() != cc.len() {
                    return fail("exchange must swap two adjacent formulas");
                }
                let swapped = |i: usize| {
                    i + 1 < pc.len() && {
                        let mut v = pc.clone();
                        v.swap(i, i + 1);
                        &v == cc
                    }
                };
                let ok = match l.aux.pos {
                    Some(i) => swapped(i),
                    None => (0..pc.len().saturating_sub(1)).any(swapped),
                };
                if ok {
                    Ok(())
                } else {
                    fail("exchange must swap two adjacent formulas")
                }
            }
            Rule::WL | Rule::WR | Rule::ZeroR | Rule::OneL => {
                let left = matches!(l.rule, Rule::WL | Rule::OneL);
                let (cc, pc) = if left { (&c.ante, &prem[0].ante) } else { (&c.succ, &prem[0].succ) };
                let (co, po) = if left { (&c.succ, &prem[0].succ) } else { (&c.ante, &prem[0].ante) };
                let added = cc.last().copied();
                let ok = co == po
                    && cc.len() == pc.len() + 1
                    && cc[..pc.len()] == pc[..]
                    && match l.rule {
                        Rule::ZeroR => added == Some(b(Formula::zero())),
                        Rule::OneL => added == Some(b(Formula::one())),
                        _ => true,
                    };
                if ok {
                    Ok(())
                } else {
                    Err(schema(format!("{} must add a formula at the end", l.rule)))
                }
            }
            Rule::CL | Rule::CR => {
                let left = l.rule == Rule::CL;
                let (cc, pc) = if left { (&c.ante, &prem[0].ante) } else { (&c.succ, &prem[0].succ) };
                let (co, po) = if left { (&c.succ, &prem[0].succ) } else { (&c.ante, &prem[0].ante) };
                let ok = co == po
                    && pc.len() == cc.len() + 1
                    && !cc.is_empty()
                    && pc[..cc.len()] == cc[..]
                    && pc.last() == cc.last();
                if ok {
                    Ok(())
                } else {
                    fail("contraction must merge the last two copies")
                }
            }
            Rule::Cut => {
                let (p0, p1) = (prem[0], prem[1]);
                let ok = p0.ante == c.ante
                    && p0.succ.len() == c.succ.len() + 1
                    && p0.succ[..c.succ.len()] == c.succ[..]
                    && eq(p1, &cat(&c.ante, &p0.succ[c.succ.len()..]), &c.succ);
                if ok {
                    Ok(())
                } else {
                    fail("premises are not `Γ |- Δ, A` and `Γ, A |- Δ`")
                }
            }
            _ => {
                let left = matches!(l.rule, Rule::OrL | Rule::DecL | Rule::NotL | Rule::AndL);
                let side = if left { &c.ante } else { &c.succ };
                let Some(&q) = side.last() else { return fail("missing principal formula") };
                if l.aux.pos.is_some_and(|i| i + 1 != side.len()) {
                    return fail("principal formula must be last in strict mode");
                }
                let Some(expect) = self.expected_premises(l, q)? else {
                    return Err(schema(format!("{} does not apply to {q}", l.rule)));
                };
                let ctx_a: &[Query] = if left { &c.ante[..c.ante.len() - 1] } else { &c.ante };
                let ctx_s: &[Query] = if left { &c.succ } else { &c.succ[..c.succ.len() - 1] };
                for (k, (a, s)) in expect.iter().enumerate() {
                    if !eq(prem[k], &cat(ctx_a, a), &cat(ctx_s, s)) {
                        return Err(schema(format!("premise {k} does not match {} on {q}", l.rule)));
                    }
                }
                if matches!(l.rule, Rule::AndL | Rule::AndR) {
                    self.and_principal_ok(q)?;
                }
                Ok(())
            }
        }
    }
}

fn exact(c: &Sequent, a: &[Query], s: &[Query], msg: &str) -> R {
    if c.ante == a && c.succ == s {
        Ok(())
    } else {
        Err(schema(msg))
    }
}

fn side_add(c: &Sequent, p: &Sequent, left: bool, q: Query, name: &str) -> R {
    let ok = if left {
        c.succ == p.succ && ms_minus(&c.ante, &p.ante).as_deref() == Some(&[q][..])
    } else {
        c.ante == p.ante && ms_minus(&c.succ, &p.succ).as_deref() == Some(&[q][..])
    };
    if ok {
        Ok(())
    } else {
        Err(schema(format!("{name} must add {q}")))
    }
}

fn cut_ok(c: &Sequent, p0: &Sequent, p1: &Sequent) -> bool {
    if p0.ante != c.ante || p1.succ != c.succ {
        return false;
    }
    match (ms_minus(&p0.succ, &c.succ), ms_minus(&p1.ante, &c.ante)) {
        (Some(x), Some(y)) => x.len() == 1 && x == y,
        _ => false,
    }
}

/// `big − small` for sorted multisets, if `small ⊆ big`.
pub(crate) fn ms_minus(big: &[Query], small: &[Query]) -> Option<Vec<Query>> {
    let mut out = Vec::with_capacity(big.len().saturating_sub(small.len()));
    let mut j = 0;
    let mut small_sorted;
    let small = if small.windows(2).all(|w| w[0] <= w[1]) {
        small
    } else {
        small_sorted = small.to_vec();
        small_sorted.sort();
        &small_sorted[..]
    };
    for &x in big {
        if j < small.len() && small[j] == x {
            j += 1;
        } else if j < small.len() && small[j] < x {
            return None;
        } else {
            out.push(x);
        }
    }
    (j == small.len()).then_some(out)
}
