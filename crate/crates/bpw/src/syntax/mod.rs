//! Formulas, Boolean queries, extension variables and axiom sets.
//!
//! Every formula and query is hash-consed into a process-wide table, so
//! structural equality and identity coincide and handles are `Copy`.

mod axioms;
pub(crate) mod class;
mod parse;
mod render;

pub use axioms::{ext_vars_of, AxiomViolation, ExtAxiomSet};
pub use class::{classify, FormulaClass, Shape};
pub use parse::{parse_axioms, parse_formula, parse_query, parse_sequent, ParsedAxioms};
pub use render::{render_axioms, render_formula, render_query, render_sequent, Namer, PlainNames, VarNames};

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("ill-founded axiom set: definition of {var} refers to {reference}")]
    IllFounded { var: String, reference: String },
    #[error("extension variable {0} defined twice")]
    Duplicate(String),
    #[error("undefined extension variable {0}")]
    Undefined(String),
}

// ---------------------------------------------------------------------------
// Propositional variables

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PVar(u32);

#[derive(Default)]
struct Symbols {
    names: Vec<&'static str>,
    ids: HashMap<&'static str, u32>,
}

fn symbols() -> &'static Mutex<Symbols> {
    static S: OnceLock<Mutex<Symbols>> = OnceLock::new();
    S.get_or_init(Default::default)
}

impl PVar {
    /// The variable with the given full name, e.g. `p3`.
    pub fn new(name: &str) -> PVar {
        let mut s = symbols().lock().unwrap();
        if let Some(&i) = s.ids.get(name) {
            return PVar(i);
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        let i = s.names.len() as u32;
        s.names.push(leaked);
        s.ids.insert(leaked, i);
        PVar(i)
    }

    /// Shorthand for `p<i>`.
    pub fn idx(i: usize) -> PVar {
        PVar::new(&format!("p{i}"))
    }

    pub fn name(self) -> &'static str {
        symbols().lock().unwrap().names[self.0 as usize]
    }
}

impl Ord for PVar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        natural_cmp(self.name(), other.name()).then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for PVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for PVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Compares names so that embedded numbers order numerically (`p2 < p10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return Ordering::Equal,
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let i = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let j = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (nx, ny) = (trim_zeros(&x[..i]), trim_zeros(&y[..j]));
                let o = nx.len().cmp(&ny.len()).then(nx.cmp(ny));
                if o != Ordering::Equal {
                    return o;
                }
                x = &x[i..];
                y = &y[j..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let k = s.iter().take_while(|&&c| c == b'0').count();
    &s[k.min(s.len().saturating_sub(1))..]
}

// ---------------------------------------------------------------------------
// Extension variables

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sort {
    /// `e`: eNDT variables.
    E,
    /// `u`: co-eNDT variables.
    U,
    /// `x`: e∃∀DT variables.
    X,
}

impl Sort {
    pub fn letter(self) -> char {
        match self {
            Sort::E => 'e',
            Sort::U => 'u',
            Sort::X => 'x',
        }
    }

    pub fn from_letter(c: char) -> Option<Sort> {
        match c {
            'e' => Some(Sort::E),
            'u' => Some(Sort::U),
            'x' => Some(Sort::X),
            _ => None,
        }
    }
}

/// Structural key of a generated variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GenKey {
    pub tag: &'static str,
    pub fs: Vec<Formula>,
    pub ints: Vec<i64>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum VarKey {
    Named(String),
    Gen(GenKey),
}

struct VNode {
    id: u32,
    sort: Sort,
    key: VarKey,
    serial: u32,
}

#[derive(Clone, Copy)]
pub struct ExtVar(&'static VNode);

#[derive(Default)]
struct VarTable {
    map: HashMap<(Sort, VarKey), &'static VNode>,
    next: u32,
    gen_count: [u32; 3],
}

fn var_table() -> &'static Mutex<VarTable> {
    static T: OnceLock<Mutex<VarTable>> = OnceLock::new();
    T.get_or_init(Default::default)
}

impl ExtVar {
    fn intern(sort: Sort, key: VarKey) -> ExtVar {
        let mut t = var_table().lock().unwrap();
        if let Some(n) = t.map.get(&(sort, key.clone())) {
            return ExtVar(n);
        }
        let id = t.next;
        t.next += 1;
        let serial = if matches!(key, VarKey::Gen(_)) {
            let c = &mut t.gen_count[sort as usize];
            *c += 1;
            *c - 1
        } else {
            0
        };
        let node: &'static VNode = Box::leak(Box::new(VNode { id, sort, key: key.clone(), serial }));
        t.map.insert((sort, key), node);
        ExtVar(node)
    }

    /// A user-named variable such as `e42` (`sort = E`, `ident = "42"`).
    pub fn named(sort: Sort, ident: &str) -> ExtVar {
        ExtVar::intern(sort, VarKey::Named(ident.to_string()))
    }

    /// A generated variable keyed by its structural parameters.
    pub fn gen(sort: Sort, tag: &'static str, fs: Vec<Formula>, ints: Vec<i64>) -> ExtVar {
        ExtVar::intern(sort, VarKey::Gen(GenKey { tag, fs, ints }))
    }

    /// Looks up a user-named variable without creating it.
    pub fn lookup_named(sort: Sort, ident: &str) -> Option<ExtVar> {
        let t = var_table().lock().unwrap();
        t.map.get(&(sort, VarKey::Named(ident.to_string()))).map(|n| ExtVar(n))
    }

    pub fn id(self) -> u32 {
        self.0.id
    }

    pub fn sort(self) -> Sort {
        self.0.sort
    }

    pub fn key(self) -> &'static VarKey {
        &self.0.key
    }

    pub fn gen_key(self) -> Option<&'static GenKey> {
        match &self.0.key {
            VarKey::Gen(g) => Some(g),
            VarKey::Named(_) => None,
        }
    }

    pub fn is_generated(self) -> bool {
        self.gen_key().is_some()
    }

    /// Per-sort creation number of a generated variable.
    pub fn serial(self) -> u32 {
        self.0.serial
    }

    /// Human-readable description of the key, used in name-map comments.
    pub fn describe(self) -> String {
        match &self.0.key {
            VarKey::Named(s) => format!("{}{}", self.0.sort.letter(), s),
            VarKey::Gen(g) => {
                let mut parts: Vec<String> = Vec::new();
                let names: &[&str] = match g.tag {
                    "thr" => &["j", "k"],
                    "cell" => &["i", "k", "j", "c", "b"],
                    "kx" | "kvar" => &["k"],
                    _ => &[],
                };
                for (n, v) in g.ints.iter().enumerate() {
                    match names.get(n) {
                        Some(nm) => parts.push(format!("{nm}={v}")),
                        None => parts.push(v.to_string()),
                    }
                }
                let label = match g.tag {
                    "thr" => "Thr",
                    "cell" => "D",
                    "pdec" => "pdec",
                    other => other,
                };
                if g.tag == "pdec" || parts.is_empty() {
                    let fs: Vec<String> = g.fs.iter().map(|f| f.to_string()).collect();
                    format!("{label}[{}]", fs.join(";"))
                } else {
                    format!("{label}[{}]", parts.join(","))
                }
            }
        }
    }
}

impl PartialEq for ExtVar {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for ExtVar {}
impl Hash for ExtVar {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.id.hash(h)
    }
}
impl Ord for ExtVar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.id.cmp(&other.0.id)
    }
}
impl PartialOrd for ExtVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExtVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", PlainNames.var_name(*self))
    }
}

impl fmt::Display for ExtVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", PlainNames.var_name(*self))
    }
}

// ---------------------------------------------------------------------------
// Formulas

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Zero,
    One,
    /// `Dec(a, p, b)`: `b` if `p` holds, else `a`.
    Dec(Formula, PVar, Formula),
    Or(Formula, Formula),
    And(Formula, Formula),
    Var(PVar),
    Ext(ExtVar),
}

struct FNode {
    id: u32,
    node: Node,
}

#[derive(Clone, Copy)]
pub struct Formula(&'static FNode);

#[derive(Default)]
struct FormulaTable {
    map: HashMap<Node, &'static FNode>,
    next: u32,
}

fn formula_table() -> &'static Mutex<FormulaTable> {
    static T: OnceLock<Mutex<FormulaTable>> = OnceLock::new();
    T.get_or_init(Default::default)
}

impl Formula {
    pub fn mk(node: Node) -> Formula {
        let mut t = formula_table().lock().unwrap();
        if let Some(n) = t.map.get(&node) {
            return Formula(n);
        }
        let id = t.next;
        t.next += 1;
        let n: &'static FNode = Box::leak(Box::new(FNode { id, node }));
        t.map.insert(node, n);
        Formula(n)
    }

    pub fn zero() -> Formula {
        Formula::mk(Node::Zero)
    }
    pub fn one() -> Formula {
        Formula::mk(Node::One)
    }
    pub fn constant(b: bool) -> Formula {
        if b {
            Formula::one()
        } else {
            Formula::zero()
        }
    }
    pub fn dec(a: Formula, p: PVar, b: Formula) -> Formula {
        Formula::mk(Node::Dec(a, p, b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::mk(Node::Or(a, b))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::mk(Node::And(a, b))
    }
    pub fn var(p: PVar) -> Formula {
        Formula::mk(Node::Var(p))
    }
    pub fn ext(v: ExtVar) -> Formula {
        Formula::mk(Node::Ext(v))
    }

    pub fn node(self) -> Node {
        self.0.node
    }
    pub fn id(self) -> u32 {
        self.0.id
    }

    pub fn as_ext(self) -> Option<ExtVar> {
        match self.node() {
            Node::Ext(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_const(self) -> Option<bool> {
        match self.node() {
            Node::Zero => Some(false),
            Node::One => Some(true),
            _ => None,
        }
    }

    /// Immediate syntactic children.
    pub fn children(self) -> Vec<Formula> {
        match self.node() {
            Node::Dec(a, _, b) | Node::Or(a, b) | Node::And(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn base(self) -> Query {
        Query::base(self)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Formula {}
impl Hash for Formula {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.id.hash(h)
    }
}
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.id.cmp(&other.0.id)
    }
}
impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(*self, &mut PlainNames))
    }
}
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(*self, &mut PlainNames))
    }
}

// ---------------------------------------------------------------------------
// Queries

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum QNode {
    Base(Formula),
    Not(Query),
    Or(Query, Query),
    And(Query, Query),
}

struct QNodeBox {
    id: u32,
    node: QNode,
}

#[derive(Clone, Copy)]
pub struct Query(&'static QNodeBox);

#[derive(Default)]
struct QueryTable {
    map: HashMap<QNode, &'static QNodeBox>,
    next: u32,
}

fn query_table() -> &'static Mutex<QueryTable> {
    static T: OnceLock<Mutex<QueryTable>> = OnceLock::new();
    T.get_or_init(Default::default)
}

impl Query {
    pub fn mk(node: QNode) -> Query {
        let mut t = query_table().lock().unwrap();
        if let Some(n) = t.map.get(&node) {
            return Query(n);
        }
        let id = t.next;
        t.next += 1;
        let n: &'static QNodeBox = Box::leak(Box::new(QNodeBox { id, node }));
        t.map.insert(node, n);
        Query(n)
    }

    pub fn base(f: Formula) -> Query {
        Query::mk(QNode::Base(f))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(q: Query) -> Query {
        Query::mk(QNode::Not(q))
    }
    pub fn or(a: Query, b: Query) -> Query {
        Query::mk(QNode::Or(a, b))
    }
    pub fn and(a: Query, b: Query) -> Query {
        Query::mk(QNode::And(a, b))
    }
    /// `q ⊃ r`, i.e. `or(not(q), r)`.
    pub fn implies(q: Query, r: Query) -> Query {
        Query::or(Query::not(q), r)
    }

    pub fn node(self) -> QNode {
        self.0.node
    }
    pub fn id(self) -> u32 {
        self.0.id
    }

    pub fn as_base(self) -> Option<Formula> {
        match self.node() {
            QNode::Base(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_base(self) -> bool {
        self.as_base().is_some()
    }

    /// Balanced conjunction, split at `⌊k/2⌋`; empty is `1`.
    pub fn big_and(qs: &[Query]) -> Query {
        match qs.len() {
            0 => Query::base(Formula::one()),
            1 => qs[0],
            k => {
                let (l, r) = qs.split_at(k / 2);
                Query::and(Query::big_and(l), Query::big_and(r))
            }
        }
    }

    /// Balanced disjunction, split at `⌊k/2⌋`; empty is `0`.
    pub fn big_or(qs: &[Query]) -> Query {
        match qs.len() {
            0 => Query::base(Formula::zero()),
            1 => qs[0],
            k => {
                let (l, r) = qs.split_at(k / 2);
                Query::or(Query::big_or(l), Query::big_or(r))
            }
        }
    }

    /// Disjunctive components, at either tier.
    pub fn split_or(self) -> Option<(Query, Query)> {
        match self.node() {
            QNode::Or(a, b) => Some((a, b)),
            QNode::Base(f) => match f.node() {
                Node::Or(a, b) => Some((Query::base(a), Query::base(b))),
                _ => None,
            },
            _ => None,
        }
    }

    /// Conjunctive components, at either tier.
    pub fn split_and(self) -> Option<(Query, Query)> {
        match self.node() {
            QNode::And(a, b) => Some((a, b)),
            QNode::Base(f) => match f.node() {
                Node::And(a, b) => Some((Query::base(a), Query::base(b))),
                _ => None,
            },
            _ => None,
        }
    }

    /// Base formulas at the leaves, left to right, with repetitions.
    pub fn leaves(self) -> Vec<Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(q) = stack.pop() {
            match q.node() {
                QNode::Base(f) => out.push(f),
                QNode::Not(a) => stack.push(a),
                QNode::Or(a, b) | QNode::And(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }
}

impl PartialEq for Query {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Query {}
impl Hash for Query {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.id.hash(h)
    }
}
impl Ord for Query {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.id.cmp(&other.0.id)
    }
}
impl PartialOrd for Query {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_query(*self, &mut PlainNames))
    }
}
impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_query(*self, &mut PlainNames))
    }
}

impl From<Formula> for Query {
    fn from(f: Formula) -> Query {
        Query::base(f)
    }
}

// ---------------------------------------------------------------------------
// Sequents

/// A sequent `Γ |- Δ`; cedents are ordered lists.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Sequent {
    pub ante: Vec<Query>,
    pub succ: Vec<Query>,
}

impl Sequent {
    pub fn new(ante: Vec<Query>, succ: Vec<Query>) -> Sequent {
        Sequent { ante, succ }
    }

    /// Sequent over base formulas.
    pub fn of(ante: &[Formula], succ: &[Formula]) -> Sequent {
        Sequent {
            ante: ante.iter().map(|&f| Query::base(f)).collect(),
            succ: succ.iter().map(|&f| Query::base(f)).collect(),
        }
    }

    /// Both cedents sorted; equality of normal forms is multiset equality.
    pub fn normalized(&self) -> Sequent {
        let mut s = self.clone();
        s.ante.sort();
        s.succ.sort();
        s
    }

    /// Sorted and deduplicated cedents.
    pub fn as_sets(&self) -> Sequent {
        let mut s = self.normalized();
        s.ante.dedup();
        s.succ.dedup();
        s
    }

    pub fn queries(&self) -> impl Iterator<Item = Query> + '_ {
        self.ante.iter().chain(self.succ.iter()).copied()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_sequent(self, &mut PlainNames))
    }
}

// ---------------------------------------------------------------------------
// Sizes

/// Symbol count of a formula term: leaves and connectives count 1 each.
pub fn formula_size(f: Formula) -> u64 {
    let mut memo = HashMap::new();
    fsize(f, &mut memo)
}

fn fsize(f: Formula, memo: &mut HashMap<Formula, u64>) -> u64 {
    if let Some(&s) = memo.get(&f) {
        return s;
    }
    let s = match f.node() {
        Node::Zero | Node::One | Node::Var(_) | Node::Ext(_) => 1,
        Node::Dec(a, _, b) | Node::Or(a, b) | Node::And(a, b) => {
            1u64.saturating_add(fsize(a, memo)).saturating_add(fsize(b, memo))
        }
    };
    memo.insert(f, s);
    s
}

pub fn query_size(q: Query) -> u64 {
    match q.node() {
        QNode::Base(f) => formula_size(f),
        QNode::Not(a) => 1 + query_size(a),
        QNode::Or(a, b) | QNode::And(a, b) => 1 + query_size(a) + query_size(b),
    }
}

pub fn sequent_size(s: &Sequent) -> u64 {
    s.queries().map(query_size).sum()
}

/// Propositional variables occurring in `f` or, transitively, in definitions.
pub fn pvars_of(fs: &[Formula], e: &ExtAxiomSet) -> Vec<PVar> {
    let mut seen = std::collections::HashSet::new();
    let mut out = std::collections::BTreeSet::new();
    let mut stack: Vec<Formula> = fs.to_vec();
    while let Some(f) = stack.pop() {
        if !seen.insert(f) {
            continue;
        }
        match f.node() {
            Node::Zero | Node::One => {}
            Node::Var(p) => {
                out.insert(p);
            }
            Node::Dec(a, p, b) => {
                out.insert(p);
                stack.push(a);
                stack.push(b);
            }
            Node::Or(a, b) | Node::And(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            Node::Ext(v) => {
                if let Some(d) = e.def(v) {
                    stack.push(d);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Propositional variables of all base leaves of the given queries.
pub fn pvars_of_queries(qs: &[Query], e: &ExtAxiomSet) -> Vec<PVar> {
    let fs: Vec<Formula> = qs.iter().flat_map(|q| q.leaves()).collect();
    pvars_of(&fs, e)
}

/// Immediate `<_E` predecessors.
pub fn e_predecessors(f: Formula, e: &ExtAxiomSet) -> Result<Vec<Formula>, SyntaxError> {
    Ok(match f.node() {
        Node::Zero | Node::One | Node::Var(_) => Vec::new(),
        Node::Dec(a, _, b) | Node::Or(a, b) | Node::And(a, b) => {
            if a == b {
                vec![a]
            } else {
                vec![a, b]
            }
        }
        Node::Ext(v) => vec![e.def(v).ok_or_else(|| SyntaxError::Undefined(v.to_string()))?],
    })
}

/// The transitive `<_E` closure below `f` (excluding `f`).
pub fn e_closure(f: Formula, e: &ExtAxiomSet) -> Result<Vec<Formula>, SyntaxError> {
    let mut seen = std::collections::HashSet::new();
    let mut order = Vec::new();
    let mut stack = e_predecessors(f, e)?;
    while let Some(g) = stack.pop() {
        if seen.insert(g) {
            order.push(g);
            stack.extend(e_predecessors(g, e)?);
        }
    }
    Ok(order)
}
