use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use super::{max_vars, Assignment, SemError};
use crate::syntax::{pvars_of_queries, ExtAxiomSet, Formula, Node, PVar, QNode, Query, Sequent};

/// Values of a formula or query on all `2^n` assignments of a universe.
///
/// Bit `a` holds the value at [`Assignment::from_index`]`(universe, a)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruthTable {
    pub universe: Vec<PVar>,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn len(&self) -> u64 {
        1u64 << self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, a: u64) -> bool {
        (self.words[(a / 64) as usize] >> (a % 64)) & 1 == 1
    }

    pub fn count_true(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_valid(&self) -> bool {
        self.count_true() == self.len()
    }

    pub fn is_unsat(&self) -> bool {
        self.count_true() == 0
    }

    /// First assignment where the table is 0.
    pub fn first_false(&self) -> Option<Assignment> {
        (0..self.len()).find(|&a| !self.get(a)).map(|a| Assignment::from_index(&self.universe, a))
    }

    /// Header line with the universe, then the table as hex (bit 0 first
    /// within each byte).
    pub fn to_hex(&self) -> String {
        let nbytes = (self.len() as usize).div_ceil(8);
        let bytes: Vec<u8> = (0..nbytes).map(|i| (self.words[i / 8] >> (8 * (i % 8))) as u8).collect();
        let names: Vec<&str> = self.universe.iter().map(|p| p.name()).collect();
        format!("# universe {}\n{}\n", names.join(" "), hex::encode(bytes))
    }

    pub fn from_hex(text: &str) -> Result<TruthTable, String> {
        let mut lines = text.lines();
        let head = lines.next().ok_or("empty input")?;
        let names = head.strip_prefix("# universe").ok_or("missing universe header")?;
        let universe: Vec<PVar> = names.split_whitespace().map(PVar::new).collect();
        let bytes = hex::decode(lines.next().unwrap_or("").trim()).map_err(|e| e.to_string())?;
        let n = universe.len();
        if bytes.len() != (1usize << n).div_ceil(8) {
            return Err("table length does not match universe".into());
        }
        let mut words = vec![0u64; (1usize << n).div_ceil(64)];
        for (i, b) in bytes.iter().enumerate() {
            words[i / 8] |= (*b as u64) << (8 * (i % 8));
        }
        Ok(TruthTable { universe, words })
    }

    /// The table as a string of `0`/`1` in index order.
    pub fn bitstring(&self) -> String {
        (0..self.len()).map(|a| if self.get(a) { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Postorder over the formula DAG below `roots`, following definitions.
fn topo(roots: &[Formula], e: &ExtAxiomSet) -> Result<Vec<Formula>, SemError> {
    let mut order = Vec::new();
    let mut done: HashSet<Formula> = HashSet::new();
    let mut stack: Vec<(Formula, bool)> = roots.iter().map(|&f| (f, false)).collect();
    while let Some((f, ready)) = stack.pop() {
        if done.contains(&f) {
            continue;
        }
        if ready {
            done.insert(f);
            order.push(f);
            continue;
        }
        stack.push((f, true));
        match f.node() {
            Node::Dec(a, _, b) | Node::Or(a, b) | Node::And(a, b) => {
                stack.push((b, false));
                stack.push((a, false));
            }
            Node::Ext(v) => {
                let d = e.def(v).ok_or_else(|| SemError::Undefined(v.to_string()))?;
                stack.push((d, false));
            }
            _ => {}
        }
    }
    Ok(order)
}

const VAR_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Bit-parallel table of a query over `universe`.
pub fn truth_table_query(q: Query, e: &ExtAxiomSet, universe: &[PVar]) -> Result<TruthTable, SemError> {
    let n = universe.len();
    let cap = max_vars();
    if n > cap {
        return Err(SemError::CapExceeded { n, cap });
    }
    let leaves = q.leaves();
    let order = topo(&leaves, e)?;
    let pos: HashMap<Formula, usize> = order.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let var_bit: HashMap<PVar, usize> = universe.iter().enumerate().map(|(i, &p)| (p, n - 1 - i)).collect();
    for &f in &order {
        let p = match f.node() {
            Node::Var(p) | Node::Dec(_, p, _) => p,
            _ => continue,
        };
        if !var_bit.contains_key(&p) {
            return Err(SemError::OutsideUniverse(p.to_string()));
        }
    }

    // Block of 2^m assignments; shrink blocks for large DAGs.
    let budget_words = (1usize << 22) / order.len().max(1);
    let mut m = n.min(14);
    while m > 6 && (1usize << (m - 6)) > budget_words {
        m -= 1;
    }
    let words_per_block = (1usize << m).div_ceil(64);
    let blocks = 1usize << (n - m);

    let run_block = |blk: usize| -> Vec<u64> {
        let mask = if m >= 6 { u64::MAX } else { (1u64 << (1 << m)) - 1 };
        let var_word = |p: PVar, w: usize| -> u64 {
            let s = var_bit[&p];
            if s < 6 {
                VAR_PATTERNS[s] & mask
            } else if s < m {
                if (w >> (s - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            } else if (blk >> (s - m)) & 1 == 1 {
                mask
            } else {
                0
            }
        };
        let mut vals: Vec<Vec<u64>> = Vec::with_capacity(order.len());
        for &f in &order {
            let v: Vec<u64> = match f.node() {
                Node::Zero => vec![0; words_per_block],
                Node::One => vec![mask; words_per_block],
                Node::Var(p) => (0..words_per_block).map(|w| var_word(p, w)).collect(),
                Node::Dec(a, p, b) => {
                    let (va, vb) = (&vals[pos[&a]], &vals[pos[&b]]);
                    (0..words_per_block)
                        .map(|w| {
                            let s = var_word(p, w);
                            (va[w] & !s) | (vb[w] & s)
                        })
                        .collect()
                }
                Node::Or(a, b) => {
                    let (va, vb) = (&vals[pos[&a]], &vals[pos[&b]]);
                    (0..words_per_block).map(|w| va[w] | vb[w]).collect()
                }
                Node::And(a, b) => {
                    let (va, vb) = (&vals[pos[&a]], &vals[pos[&b]]);
                    (0..words_per_block).map(|w| va[w] & vb[w]).collect()
                }
                Node::Ext(v) => vals[pos[&e.def(v).expect("checked in topo")]].clone(),
            };
            vals.push(v);
        }
        eval_query_words(q, &|f| vals[pos[&f]].clone(), mask)
    };

    let parts: Vec<Vec<u64>> = if blocks > 1 {
        (0..blocks).into_par_iter().map(run_block).collect()
    } else {
        vec![run_block(0)]
    };
    let words: Vec<u64> = if m >= 6 {
        parts.into_iter().flatten().collect()
    } else {
        // Blocks smaller than a word only happen when there is one block.
        parts.into_iter().next().unwrap_or_default()
    };
    Ok(TruthTable { universe: universe.to_vec(), words })
}

fn eval_query_words(q: Query, base: &dyn Fn(Formula) -> Vec<u64>, mask: u64) -> Vec<u64> {
    match q.node() {
        QNode::Base(f) => base(f),
        QNode::Not(a) => eval_query_words(a, base, mask).into_iter().map(|w| !w & mask).collect(),
        QNode::Or(a, b) => {
            let (x, y) = (eval_query_words(a, base, mask), eval_query_words(b, base, mask));
            x.iter().zip(&y).map(|(u, v)| u | v).collect()
        }
        QNode::And(a, b) => {
            let (x, y) = (eval_query_words(a, base, mask), eval_query_words(b, base, mask));
            x.iter().zip(&y).map(|(u, v)| u & v).collect()
        }
    }
}

/// Table of a formula over `universe`.
pub fn truth_table(f: Formula, e: &ExtAxiomSet, universe: &[PVar]) -> Result<TruthTable, SemError> {
    truth_table_query(Query::base(f), e, universe)
}

fn sequent_query(s: &Sequent) -> Query {
    Query::implies(Query::big_and(&s.ante), Query::big_or(&s.succ))
}

/// Whether every assignment making all of the antecedent true makes some
/// succedent query true.
pub fn sequent_valid(s: &Sequent, e: &ExtAxiomSet) -> Result<bool, SemError> {
    Ok(sequent_countermodel(s, e)?.is_none())
}

/// An assignment falsifying the sequent, if any.
pub fn sequent_countermodel(s: &Sequent, e: &ExtAxiomSet) -> Result<Option<Assignment>, SemError> {
    let qs: Vec<Query> = s.queries().collect();
    let universe = pvars_of_queries(&qs, e);
    let t = truth_table_query(sequent_query(s), e, &universe)?;
    Ok(t.first_false())
}
