use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use super::{ExtAxiomSet, ExtVar, Formula, Node, QNode, Query, Sequent, Sort, VarKey};

/// Chooses printed names for extension variables.
pub trait VarNames {
    fn var_name(&mut self, v: ExtVar) -> String;
}

/// Debug naming: generated variables print as `e_17`.
pub struct PlainNames;

impl VarNames for PlainNames {
    fn var_name(&mut self, v: ExtVar) -> String {
        match v.key() {
            VarKey::Named(s) => format!("{}{}", v.sort().letter(), s),
            VarKey::Gen(_) => format!("{}_{}", v.sort().letter(), v.serial()),
        }
    }
}

/// File naming: generated variables get fresh plain indices (`e0`, `e1`, ...)
/// that avoid every user-named identifier.
#[derive(Default)]
pub struct Namer {
    used: HashSet<(Sort, String)>,
    assigned: HashMap<ExtVar, String>,
    next: [u64; 3],
    generated: Vec<ExtVar>,
}

impl Namer {
    pub fn new() -> Namer {
        Namer::default()
    }

    /// Reserves user names of `e` and numbers generated variables in axiom order.
    pub fn for_axioms(e: &ExtAxiomSet) -> Namer {
        let mut n = Namer::new();
        for &(v, _) in e.entries() {
            n.reserve(v);
        }
        for &(v, _) in e.entries() {
            n.var_name(v);
        }
        n
    }

    /// Marks the name of a user-named variable as taken.
    pub fn reserve(&mut self, v: ExtVar) {
        if let VarKey::Named(s) = v.key() {
            self.used.insert((v.sort(), s.clone()));
        }
    }

    /// Reserves user names occurring anywhere in `fs`.
    pub fn reserve_in(&mut self, fs: impl IntoIterator<Item = Formula>) {
        for f in fs {
            for v in super::axioms::ext_vars_of(f) {
                self.reserve(v);
            }
        }
    }

    /// `# name e17 = Thr[j=2,k=1]` lines for generated variables.
    pub fn name_map(&self) -> String {
        let mut s = String::new();
        for &v in &self.generated {
            let _ = writeln!(s, "# name {} = {}", self.assigned[&v], v.describe());
        }
        s
    }
}

impl VarNames for Namer {
    fn var_name(&mut self, v: ExtVar) -> String {
        if let Some(s) = self.assigned.get(&v) {
            return s.clone();
        }
        let name = match v.key() {
            VarKey::Named(s) => format!("{}{}", v.sort().letter(), s),
            VarKey::Gen(_) => {
                let slot = &mut self.next[v.sort() as usize];
                loop {
                    let cand = slot.to_string();
                    *slot += 1;
                    if self.used.insert((v.sort(), cand.clone())) {
                        break format!("{}{}", v.sort().letter(), cand);
                    }
                }
            }
        };
        if v.is_generated() {
            self.generated.push(v);
        }
        self.assigned.insert(v, name.clone());
        name
    }
}

pub fn render_formula(f: Formula, names: &mut dyn VarNames) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, names);
    s
}

fn write_formula(s: &mut String, f: Formula, names: &mut dyn VarNames) {
    match f.node() {
        Node::Zero => s.push('0'),
        Node::One => s.push('1'),
        Node::Var(p) => s.push_str(p.name()),
        Node::Ext(v) => s.push_str(&names.var_name(v)),
        Node::Dec(a, p, b) => {
            s.push_str("dec(");
            write_formula(s, a, names);
            s.push(',');
            s.push_str(p.name());
            s.push(',');
            write_formula(s, b, names);
            s.push(')');
        }
        Node::Or(a, b) | Node::And(a, b) => {
            s.push_str(if matches!(f.node(), Node::Or(..)) { "or(" } else { "and(" });
            write_formula(s, a, names);
            s.push(',');
            write_formula(s, b, names);
            s.push(')');
        }
    }
}

pub fn render_query(q: Query, names: &mut dyn VarNames) -> String {
    let mut s = String::new();
    write_query(&mut s, q, names);
    s
}

fn write_query(s: &mut String, q: Query, names: &mut dyn VarNames) {
    match q.node() {
        QNode::Base(f) => write_formula(s, f, names),
        QNode::Not(a) => {
            s.push_str("not(");
            write_query(s, a, names);
            s.push(')');
        }
        QNode::Or(a, b) | QNode::And(a, b) => {
            let or = matches!(q.node(), QNode::Or(..));
            // Both children base: `or(..)` would read back as a formula.
            let kw = match (or, a.is_base() && b.is_base()) {
                (true, true) => "qor(",
                (true, false) => "or(",
                (false, true) => "qand(",
                (false, false) => "and(",
            };
            s.push_str(kw);
            write_query(s, a, names);
            s.push(',');
            write_query(s, b, names);
            s.push(')');
        }
    }
}

pub fn render_sequent(seq: &Sequent, names: &mut dyn VarNames) -> String {
    let side = |qs: &[Query], names: &mut dyn VarNames| {
        qs.iter().map(|&q| render_query(q, names)).collect::<Vec<_>>().join(", ")
    };
    let l = side(&seq.ante, names);
    let r = side(&seq.succ, names);
    match (l.is_empty(), r.is_empty()) {
        (true, true) => "|-".to_string(),
        (true, false) => format!("|- {r}"),
        (false, true) => format!("{l} |-"),
        (false, false) => format!("{l} |- {r}"),
    }
}

/// Axiom file text: one `v := E` per line followed by the name map.
pub fn render_axioms(e: &ExtAxiomSet, names: &mut Namer) -> String {
    let mut s = String::new();
    for &(v, f) in e.entries() {
        let _ = writeln!(s, "{} := {}", names.var_name(v), render_formula(f, names));
    }
    s.push_str(&names.name_map());
    s
}
