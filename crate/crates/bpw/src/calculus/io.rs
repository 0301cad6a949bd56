use std::path::Path;

use serde_json::{json, Map, Value};

use super::{Aux, Dir, Proof, ProofLine, Rule, SystemId};
use crate::syntax::{
    parse_axioms, parse_formula, parse_sequent, render_axioms, render_sequent, ExtAxiomSet, Namer, PVar,
    SyntaxError, VarNames,
};

#[derive(Debug, thiserror::Error)]
pub enum ProofFileError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("malformed proof file: {0}")]
    Shape(String),
}

fn shape(msg: impl Into<String>) -> ProofFileError {
    ProofFileError::Shape(msg.into())
}

/// A namer that keeps user names and numbers generated variables in axiom order.
pub fn file_namer(axioms: &ExtAxiomSet, extra: impl IntoIterator<Item = crate::syntax::Formula>) -> Namer {
    let mut n = Namer::new();
    for &(v, _) in axioms.entries() {
        n.reserve(v);
    }
    n.reserve_in(extra);
    for &(v, _) in axioms.entries() {
        n.var_name(v);
    }
    n
}

/// Serializes a proof with inline axioms: a JSON array whose first element
/// is the header.
pub fn proof_to_json(p: &Proof, sys: SystemId) -> Value {
    let leaves = p.lines.iter().flat_map(|l| l.seq.queries().flat_map(|q| q.leaves()).collect::<Vec<_>>());
    let mut names = file_namer(&p.axioms, leaves.collect::<Vec<_>>());
    let mut arr = Vec::with_capacity(p.lines.len() + 1);
    let axioms = render_axioms(&p.axioms, &mut names);
    let mut header = Map::new();
    header.insert("system".into(), json!(sys.name()));
    header.insert("axioms".into(), json!(axioms));
    if !p.provenance.is_empty() {
        header.insert("provenance".into(), json!(p.provenance));
    }
    arr.push(Value::Object(header));
    for l in &p.lines {
        let mut aux = Map::new();
        if let Some(i) = l.aux.pos {
            aux.insert("pos".into(), json!(i));
        }
        if let Some(v) = l.aux.var {
            aux.insert("var".into(), json!(v.name()));
        }
        if let Some((v, d)) = l.aux.ext {
            let dir = if d == Dir::Lr { "lr" } else { "rl" };
            aux.insert("ext".into(), json!({"var": names.var_name(v), "dir": dir}));
        }
        let mut o = Map::new();
        o.insert("id".into(), json!(l.id));
        o.insert("seq".into(), json!(render_sequent(&l.seq, &mut names)));
        o.insert("rule".into(), json!(l.rule.name()));
        o.insert("prem".into(), json!(l.prem));
        if !aux.is_empty() {
            o.insert("aux".into(), Value::Object(aux));
        }
        arr.push(Value::Object(o));
    }
    // Generated names may appear only after axioms were rendered.
    if let Some(Value::Object(h)) = arr.first_mut() {
        let map = names.name_map();
        let text = h["axioms"].as_str().unwrap_or("").to_string();
        let body: String = text.lines().filter(|l| !l.starts_with("# name ")).map(|l| format!("{l}\n")).collect();
        h.insert("axioms".into(), json!(format!("{body}{map}")));
    }
    Value::Array(arr)
}

/// Reads an axiom header value: inline text, or a path relative to `base`.
pub fn load_axioms_value(v: &str, base: Option<&Path>) -> Result<ExtAxiomSet, ProofFileError> {
    let text = if v.contains(":=") || v.contains('\n') || v.trim().is_empty() {
        v.to_string()
    } else {
        let path = match base {
            Some(b) => b.join(v),
            None => Path::new(v).to_path_buf(),
        };
        std::fs::read_to_string(path)?
    };
    Ok(parse_axioms(&text)?.set)
}

/// Parses a proof file; returns the proof and the system named in its header.
pub fn proof_from_json(text: &str, base: Option<&Path>) -> Result<(Proof, Option<SystemId>), ProofFileError> {
    let v: Value = serde_json::from_str(text)?;
    let arr = v.as_array().ok_or_else(|| shape("expected a JSON array"))?;
    let mut sys = None;
    let mut axioms = ExtAxiomSet::new();
    let mut provenance = String::new();
    let mut lines = Vec::new();
    for (k, item) in arr.iter().enumerate() {
        let o = item.as_object().ok_or_else(|| shape(format!("entry {k} is not an object")))?;
        if o.contains_key("system") || o.contains_key("axioms") {
            if let Some(s) = o.get("system").and_then(Value::as_str) {
                sys = Some(s.parse::<SystemId>().map_err(shape)?);
            }
            if let Some(a) = o.get("axioms").and_then(Value::as_str) {
                axioms = load_axioms_value(a, base)?;
            }
            if let Some(p) = o.get("provenance").and_then(Value::as_str) {
                provenance = p.to_string();
            }
            continue;
        }
        let id = o.get("id").and_then(Value::as_u64).ok_or_else(|| shape(format!("entry {k}: missing id")))? as usize;
        let seq = parse_sequent(o.get("seq").and_then(Value::as_str).ok_or_else(|| shape(format!("line {id}: missing seq")))?)?;
        let rule: Rule = o
            .get("rule")
            .and_then(Value::as_str)
            .ok_or_else(|| shape(format!("line {id}: missing rule")))?
            .parse()
            .map_err(shape)?;
        let prem = match o.get("prem") {
            None => Vec::new(),
            Some(p) => p
                .as_array()
                .ok_or_else(|| shape(format!("line {id}: prem must be an array")))?
                .iter()
                .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| shape(format!("line {id}: bad premise id"))))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let mut aux = Aux::none();
        if let Some(a) = o.get("aux").and_then(Value::as_object) {
            aux.pos = a.get("pos").and_then(Value::as_u64).map(|n| n as usize);
            if let Some(s) = a.get("var").and_then(Value::as_str) {
                aux.var = Some(PVar::new(s));
            }
            if let Some(e) = a.get("ext").and_then(Value::as_object) {
                let name = e.get("var").and_then(Value::as_str).ok_or_else(|| shape(format!("line {id}: ext.var")))?;
                let var = parse_formula(name)?.as_ext().ok_or_else(|| shape(format!("line {id}: ext.var")))?;
                let dir = match e.get("dir").and_then(Value::as_str) {
                    Some("lr") => Dir::Lr,
                    Some("rl") => Dir::Rl,
                    _ => return Err(shape(format!("line {id}: ext.dir must be lr or rl"))),
                };
                aux.ext = Some((var, dir));
            }
        }
        lines.push(ProofLine { id, seq, rule, prem, aux });
    }
    Ok((Proof { lines, axioms, provenance }, sys))
}
