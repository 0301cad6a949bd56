//! The `bpw` command line: argument parsing, file plumbing and output
//! shapes. Exit codes: 0 success, 1 checked and failed, 2 usage or I/O.

pub mod bench;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use bpw::calculus::{check_lines_semantically, check_proof_all, file_namer, proof_from_json, proof_to_json, Proof};
use bpw::constructions::{
    coelndt_to_elndt, collapse_eafdt, dualize_proof, negate_coendt, prove_k_sequent, prove_simulation, ConstructionError,
    DeciderStore, GeneratedProof, ThresholdStore,
};
use bpw::games::{
    play, proof_to_strategy, strategy_to_proof_det, strategy_to_proof_nondet, GameError, StrategyFile, System,
};
use bpw::semantics::{
    check_simulation, evaluate_query, max_vars, sequent_countermodel, truth_table_query, unfold, SemError, Simulator,
    DEFAULT_UNFOLD_CAP,
};
use bpw::syntax::{
    classify, formula_size, parse_axioms, parse_formula, parse_query, parse_sequent, pvars_of_queries, query_size,
    render_axioms, render_formula, render_query, render_sequent, sequent_size, ExtAxiomSet, Formula, Namer, PVar,
    Query, Sequent, SyntaxError,
};
use bpw::{check_proof, Assignment, Mode, SystemId};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "bpw", version, about = "Branching-program proofs, Prover-Adversary games and their translations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Extension axiom file.
    #[arg(long, global = true)]
    pub axioms: Option<PathBuf>,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the produced file here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cedent comparison for proof checking: strict or multiset.
    #[arg(long, global = true, default_value = "multiset")]
    pub mode: Mode,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula, query or sequent and print it back; with only
    /// --axioms, validate and print the axiom file.
    Parse {
        text: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Evaluate under an assignment, or print the truth table.
    Eval {
        #[arg(long)]
        formula: String,
        /// `p1=1,p2=0,...`
        #[arg(long)]
        assign: Option<String>,
    },
    /// Brute-force validity of a sequent `A, B |- C`.
    Valid { sequent: String },
    /// Unfold an ∨-free formula into a decision tree.
    Unfold {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = DEFAULT_UNFOLD_CAP)]
        cap: u64,
    },
    /// Whether `A ≲ B`.
    Simulates { a: String, b: String },
    /// A proof of `B |- A` from `A ≲ B`.
    ProveSim { a: String, b: String },
    CheckProof {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        system: Option<SystemId>,
        /// Report every failing line instead of the first.
        #[arg(long)]
        all: bool,
        /// Also check every line by truth tables.
        #[arg(long)]
        semantic: bool,
    },
    CheckStrategy {
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        system: Option<System>,
    },
    /// Threshold axioms over `B_0..B_{N-1}`, or one of their lemmas.
    GenThresholds {
        #[command(flatten)]
        list: ListArgs,
        /// mono_zero, mono_big, mono_step or truth_1 .. truth_4
        #[arg(long)]
        lemma: Option<String>,
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k: i64,
        /// Compare every Thr(j,k) with the counting function.
        #[arg(long)]
        check: bool,
    },
    /// The decider `dec(A, B_i^k, C)`, or one of its lemmas.
    GenDecider {
        #[command(flatten)]
        dec: DeciderArgs,
        /// low_count, after_flag_1 .. after_flag_4 or before_flag_1 .. before_flag_4
        #[arg(long)]
        lemma: Option<String>,
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        count: i64,
        #[arg(long, default_value_t = 0)]
        bit: u8,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        l: i64,
    },
    /// The four Immerman-Szelepcsényi sequents for one decider.
    ProveImmszel {
        #[command(flatten)]
        dec: DeciderArgs,
        /// Also check the conclusions by truth tables.
        #[arg(long)]
        semantic: bool,
    },
    ProofToStrategy {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        system: Option<SystemId>,
    },
    StrategyToProof {
        #[arg(long)]
        strategy: PathBuf,
        /// Defaults to det for DB strategies and nondet for NB.
        #[arg(long)]
        pipeline: Option<Pipeline>,
    },
    /// Dualize a co-eLNDT proof, or negate a co-eNDT formula.
    Dualize {
        #[arg(long)]
        proof: Option<PathBuf>,
        #[arg(long)]
        formula: Option<String>,
        /// Prove the same DT sequent instead of the flipped one.
        #[arg(long)]
        same_sequent: bool,
    },
    /// Collapse an eL∃∀DT proof of an NDT sequent into eLNDT.
    CollapseEafdt {
        #[arg(long)]
        proof: PathBuf,
        /// Only the k-th translated sequent.
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// Play a strategy against scripted or seeded random answers.
    Play {
        #[arg(long)]
        strategy: PathBuf,
        /// `1,1,0` or `110`
        #[arg(long)]
        answers: Option<String>,
    },
    /// CSV of size and depth measurements for a generator family.
    Bench {
        family: String,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 4)]
        to: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ListArgs {
    /// Use `p1..pN`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Explicit list, `;`-separated.
    #[arg(long)]
    pub bs: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct DeciderArgs {
    #[command(flatten)]
    pub list: ListArgs,
    #[arg(long, default_value_t = 0)]
    pub i: usize,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, default_value = "1")]
    pub a: String,
    #[arg(long, default_value = "0")]
    pub c: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    Det,
    Nondet,
}

/// Limits in force for one run.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub max_vars: usize,
    pub unfold_cap: u64,
    pub mode: Mode,
}

impl Config {
    pub fn new(common: &Common) -> Config {
        Config { max_vars: max_vars(), unfold_cap: DEFAULT_UNFOLD_CAP, mode: common.mode }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input.
    Usage(String),
    /// The input was understood and did not pass.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => m,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<SemError> for CliError {
    fn from(e: SemError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> CliError {
        match e {
            ConstructionError::Syntax(s) => CliError::Usage(s.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> CliError {
        match e {
            GameError::Shape(_) | GameError::Json(_) | GameError::Syntax(_) | GameError::Input(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

enum Artifact {
    Json(Value),
    Text(String),
}

impl Artifact {
    fn render(&self) -> String {
        match self {
            Artifact::Json(v) => {
                let mut s = serde_json::to_string_pretty(v).expect("serializable");
                s.push('\n');
                s
            }
            Artifact::Text(t) => t.clone(),
        }
    }

    fn value(&self) -> Value {
        match self {
            Artifact::Json(v) => v.clone(),
            Artifact::Text(t) => json!(t),
        }
    }
}

/// What a command produced.
struct Outcome {
    ok: bool,
    summary: String,
    fields: Map<String, Value>,
    artifact: Option<Artifact>,
}

impl Outcome {
    fn new(ok: bool, summary: impl Into<String>) -> Outcome {
        Outcome { ok, summary: summary.into(), fields: Map::new(), artifact: None }
    }

    fn field(mut self, k: &str, v: impl Into<Value>) -> Outcome {
        self.fields.insert(k.to_string(), v.into());
        self
    }

    fn with(mut self, a: Artifact) -> Outcome {
        self.artifact = Some(a);
        self
    }
}

/// Runs one command line; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let name = command_name(&cli.command);
    let common = cli.common.clone();
    match execute(cli) {
        Ok(o) => finish(name, &common, o, out, err),
        Err(e) => {
            if common.json {
                let _ = writeln!(out, "{}", json!({"command": name, "ok": false, "error": e.message()}));
            }
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn finish(name: &str, common: &Common, o: Outcome, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut fields = o.fields;
    let mut to_stdout = None;
    if let Some(a) = &o.artifact {
        match &common.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, a.render()) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
                fields.insert("out".into(), json!(path.display().to_string()));
            }
            None if common.json => {
                fields.insert("artifact".into(), a.value());
            }
            None => to_stdout = Some(a.render()),
        }
    }
    if common.json {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(name));
        obj.insert("ok".into(), json!(o.ok));
        obj.extend(fields);
        let _ = writeln!(out, "{}", Value::Object(obj));
    } else if let Some(text) = to_stdout {
        let _ = write!(out, "{text}");
        if !o.summary.is_empty() {
            let _ = writeln!(err, "{}", o.summary);
        }
    } else if !o.summary.is_empty() {
        let _ = writeln!(out, "{}", o.summary);
    }
    if o.ok {
        0
    } else {
        1
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse { .. } => "parse",
        Command::Eval { .. } => "eval",
        Command::Valid { .. } => "valid",
        Command::Unfold { .. } => "unfold",
        Command::Simulates { .. } => "simulates",
        Command::ProveSim { .. } => "prove-sim",
        Command::CheckProof { .. } => "check-proof",
        Command::CheckStrategy { .. } => "check-strategy",
        Command::GenThresholds { .. } => "gen-thresholds",
        Command::GenDecider { .. } => "gen-decider",
        Command::ProveImmszel { .. } => "prove-immszel",
        Command::ProofToStrategy { .. } => "proof-to-strategy",
        Command::StrategyToProof { .. } => "strategy-to-proof",
        Command::Dualize { .. } => "dualize",
        Command::CollapseEafdt { .. } => "collapse-eafdt",
        Command::Play { .. } => "play",
        Command::Bench { .. } => "bench",
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn base_dir(path: &Path) -> Option<&Path> {
    path.parent().filter(|p| !p.as_os_str().is_empty())
}

fn load_axioms(common: &Common) -> CliResult<ExtAxiomSet> {
    match &common.axioms {
        None => Ok(ExtAxiomSet::new()),
        Some(p) => Ok(parse_axioms(&read(p)?)?.set),
    }
}

fn load_proof(path: &Path, flag: Option<SystemId>) -> CliResult<(Proof, SystemId)> {
    let (p, header) = proof_from_json(&read(path)?, base_dir(path)).map_err(|e| CliError::Usage(e.to_string()))?;
    let sys = flag.or(header).ok_or_else(|| CliError::Usage("no system given and none in the proof header".into()))?;
    Ok((p, sys))
}

fn load_strategy(path: &Path) -> CliResult<StrategyFile> {
    Ok(StrategyFile::from_json(&read(path)?, base_dir(path))?)
}

fn list_of(l: &ListArgs) -> CliResult<Vec<Formula>> {
    match (&l.bs, l.n) {
        (Some(text), _) => text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| Ok(parse_formula(s)?)).collect(),
        (None, Some(n)) => Ok((1..=n).map(|i| Formula::var(PVar::idx(i))).collect()),
        (None, None) => Err(CliError::Usage("give --n or --bs".into())),
    }
}

fn named(s: &Sequent, e: &ExtAxiomSet) -> String {
    let leaves: Vec<Formula> = s.queries().flat_map(|q| q.leaves()).collect();
    render_sequent(s, &mut file_namer(e, leaves))
}

fn generated(g: &GeneratedProof) -> CliResult<Outcome> {
    let c = named(g.conclusion(), &g.proof.axioms);
    let summary = format!("{} proof of {c}: {} lines, size {}", g.system, g.proof.len(), g.proof.size());
    let o = Outcome::new(true, summary)
        .field("system", g.system.name())
        .field("lines", g.proof.len())
        .field("size", g.proof.size())
        .field("conclusion", c);
    match g.check() {
        Ok(()) => Ok(o.with(Artifact::Json(proof_to_json(&g.proof, g.system)))),
        Err(e) => Err(CliError::Failed(format!("generated proof fails at line {}: {}", e.id, e.kind))),
    }
}

fn game_of(sys: SystemId) -> CliResult<System> {
    match sys {
        SystemId::Ldt | SystemId::ELdt => Ok(System::DB),
        SystemId::Lndt | SystemId::ELndt => Ok(System::NB),
        other => Err(CliError::Usage(format!("no game for proofs in {other}"))),
    }
}

fn bits(text: &str) -> CliResult<Vec<bool>> {
    text.chars()
        .filter(|c| !matches!(c, ',' | ' '))
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::Usage(format!("bad answer `{c}`"))),
        })
        .collect()
}

fn execute(cli: Cli) -> CliResult<Outcome> {
    let common = &cli.common;
    let cfg = Config::new(common);
    let e = load_axioms(common)?;
    let mut names = Namer::for_axioms(&e);
    match cli.command {
        Command::Parse { text, file } => {
            let text = match (text, file) {
                (Some(t), _) => t,
                (None, Some(f)) => read(&f)?,
                (None, None) if common.axioms.is_some() => {
                    let body = render_axioms(&e, &mut names);
                    return Ok(Outcome::new(true, body.trim_end()).field("kind", "axioms").field("count", e.len()).field("text", body));
                }
                (None, None) => return Err(CliError::Usage("nothing to parse".into())),
            };
            if text.contains("|-") {
                let s = parse_sequent(&text)?;
                let r = render_sequent(&s, &mut names);
                return Ok(Outcome::new(true, r.clone()).field("kind", "sequent").field("text", r).field("size", sequent_size(&s)));
            }
            let q = parse_query(&text)?;
            match q.as_base() {
                Some(f) => {
                    let shape = classify(f, &e)?.shape().to_string();
                    let r = render_formula(f, &mut names);
                    Ok(Outcome::new(true, format!("{r}\t{shape}"))
                        .field("kind", "formula")
                        .field("text", r)
                        .field("class", shape)
                        .field("size", formula_size(f)))
                }
                None => {
                    let r = render_query(q, &mut names);
                    Ok(Outcome::new(true, r.clone()).field("kind", "query").field("text", r).field("size", query_size(q)))
                }
            }
        }
        Command::Eval { formula, assign } => {
            let q = parse_query(&formula)?;
            match assign {
                Some(a) => {
                    let alpha = Assignment::parse(&a).map_err(CliError::Usage)?;
                    let v = evaluate_query(&alpha, q, &e)?;
                    Ok(Outcome::new(true, (v as u8).to_string()).field("value", v as u8))
                }
                None => {
                    let u = pvars_of_queries(&[q], &e);
                    if u.len() > cfg.max_vars {
                        return Err(CliError::Usage(format!("{} variables exceed the limit {}", u.len(), cfg.max_vars)));
                    }
                    let t = truth_table_query(q, &e, &u)?;
                    let names: Vec<&str> = u.iter().map(|p| p.name()).collect();
                    Ok(Outcome::new(true, t.to_hex().trim_end())
                        .field("universe", names)
                        .field("table", t.to_hex().lines().nth(1).unwrap_or("").to_string())
                        .field("true_count", t.count_true()))
                }
            }
        }
        Command::Valid { sequent } => {
            let s = parse_sequent(&sequent)?;
            match sequent_countermodel(&s, &e)? {
                None => Ok(Outcome::new(true, "valid").field("valid", true)),
                Some(a) => Ok(Outcome::new(false, format!("not valid; countermodel {a}")).field("valid", false).field("countermodel", a.to_string())),
            }
        }
        Command::Unfold { formula, cap } => {
            let f = parse_formula(&formula)?;
            let u = unfold(f, &e, cap).map_err(|e| CliError::Failed(e.to_string()))?;
            let r = render_formula(u, &mut names);
            Ok(Outcome::new(true, r.clone()).field("formula", r).field("size", formula_size(u)))
        }
        Command::Simulates { a, b } => {
            let (fa, fb) = (parse_formula(&a)?, parse_formula(&b)?);
            let yes = check_simulation(fa, fb, &e)?;
            let rule = Simulator::new(&e).rule(fa, fb).map(|r| format!("{r:?}"));
            let summary = match &rule {
                Some(r) => format!("{a} ≲ {b} (last rule {r})"),
                None => format!("{a} does not simulate {b}"),
            };
            Ok(Outcome::new(yes, summary).field("simulates", yes).field("rule", rule))
        }
        Command::ProveSim { a, b } => generated(&prove_simulation(parse_formula(&a)?, parse_formula(&b)?, &e)?),
        Command::CheckProof { proof, system, all, semantic } => {
            let (p, sys) = load_proof(&proof, system)?;
            let errors: Vec<Value> = if all {
                check_proof_all(&p, sys, cfg.mode).iter().map(|x| json!({"id": x.id, "error": x.kind.to_string()})).collect()
            } else {
                check_proof(&p, sys, cfg.mode).err().map(|x| json!({"id": x.id, "error": x.kind.to_string()})).into_iter().collect()
            };
            let mut o = Outcome::new(errors.is_empty(), "")
                .field("system", sys.name())
                .field("lines", p.len())
                .field("size", p.size())
                .field("conclusion", p.conclusion().map(|s| named(s, &p.axioms)))
                .field("errors", errors.clone());
            let mut bad = Vec::new();
            if semantic {
                bad = check_lines_semantically(&p)?.into_iter().filter(|&(_, ok)| !ok).map(|(id, _)| id).collect();
                o = o.field("invalid_lines", bad.clone());
                o.ok &= bad.is_empty();
            }
            o.summary = if o.ok {
                format!("ok: {} lines in {sys}, size {}", p.len(), p.size())
            } else {
                let mut lines: Vec<String> = errors.iter().map(|x| format!("line {}: {}", x["id"], x["error"].as_str().unwrap_or(""))).collect();
                lines.extend(bad.iter().map(|id| format!("line {id}: not valid")));
                lines.join("\n")
            };
            Ok(o)
        }
        Command::CheckStrategy { strategy, system } => {
            let mut f = load_strategy(&strategy)?;
            if let Some(s) = system {
                f.system = s;
            }
            let v = f.verify()?;
            let kinds: Map<String, Value> = v.kinds.iter().map(|(k, n)| (k.to_string(), json!(n))).collect();
            let summary = format!("wins in {}: at most {} rounds, {} leaves", f.system, v.rounds, v.leaves);
            Ok(Outcome::new(true, summary)
                .field("system", f.system.name())
                .field("depth", f.strategy.depth())
                .field("rounds", v.rounds)
                .field("leaves", v.leaves)
                .field("kinds", Value::Object(kinds)))
        }
        Command::GenThresholds { list, lemma, j, k, check } => {
            let bs = list_of(&list)?;
            let n = bs.len();
            let mut st = ThresholdStore::new(bs, e.clone());
            if let Some(which) = lemma {
                return generated(&st.lemma(&which, j, k)?);
            }
            for jj in 0..=n {
                for kk in -1..=n as i64 + 1 {
                    st.thr(jj, kk)?;
                }
            }
            let mut o = Outcome::new(true, format!("Thr(j,k) for j in 0..={n}, k in -1..={}: {} axioms", n + 1, st.axioms().len()));
            if check {
                let r = st.semantics_check(-1..=n as i64 + 1)?;
                o.ok = r.is_clean();
                o = o.field("checked", r.checked).field("mismatches", r.mismatches.len());
                o.summary.push_str(&format!("; {} tables checked, {} mismatches", r.checked, r.mismatches.len()));
            }
            let mut names = Namer::for_axioms(st.axioms());
            let text = format!("# gen=thresholds n={n}\n{}", render_axioms(st.axioms(), &mut names));
            Ok(o.field("axioms", st.axioms().len()).with(Artifact::Text(text)))
        }
        Command::GenDecider { dec, lemma, j, count, bit, l } => {
            let mut d = decider(&dec, &e)?;
            if let Some(which) = lemma {
                return generated(&d.lemma(&which, j, count, bit, l)?);
            }
            let entry = d.entry()?;
            let n = d.n();
            let mut names = Namer::for_axioms(d.axioms());
            let entry_name = render_formula(entry, &mut names);
            let text = format!("# gen=decider n={n} i={} k={} entry={entry_name}\n{}", d.i(), d.k(), render_axioms(d.axioms(), &mut names));
            let bound = 2 * (n + 1) * (n + 1);
            let cells = d.cell_count();
            Ok(Outcome::new(cells <= bound, format!("decider {entry_name}: {cells} cells (bound {bound})"))
                .field("entry", entry_name)
                .field("cells", cells)
                .field("bound", bound)
                .with(Artifact::Text(text)))
        }
        Command::ProveImmszel { dec, semantic } => {
            let mut d = decider(&dec, &e)?;
            let proofs = d.immszel_proofs()?;
            let mut arr = Vec::new();
            let mut report = Vec::new();
            let mut ok = true;
            for (item, g) in proofs.iter().enumerate() {
                let checks = g.check().is_ok();
                let valid = if semantic { Some(bpw::sequent_valid(g.conclusion(), &g.proof.axioms)?) } else { None };
                ok &= checks && valid != Some(false);
                report.push(json!({"item": item + 1, "conclusion": named(g.conclusion(), &g.proof.axioms), "lines": g.proof.len(), "checks": checks, "valid": valid}));
                arr.push(proof_to_json(&g.proof, g.system));
            }
            let summary = report
                .iter()
                .map(|r| format!("{}: {} ({} lines, {})", r["item"], r["conclusion"].as_str().unwrap_or(""), r["lines"], if r["checks"] == true { "checks" } else { "FAILS" }))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::new(ok, summary).field("proofs", report).with(Artifact::Json(Value::Array(arr))))
        }
        Command::ProofToStrategy { proof, system } => {
            let (p, sys) = load_proof(&proof, system)?;
            let game = game_of(sys)?;
            let s = proof_to_strategy(&p, sys)?;
            let c = p.conclusion().ok_or_else(|| CliError::Usage("empty proof".into()))?;
            let initial: Vec<(Query, bool)> = c.ante.iter().map(|&q| (q, true)).chain(c.succ.iter().map(|&q| (q, false))).collect();
            let f = StrategyFile::new(game, p.axioms.clone(), initial, s);
            let v = f.verify()?;
            Ok(Outcome::new(true, format!("{game} strategy: depth {}, {} leaves, proof size {}", f.strategy.depth(), v.leaves, p.size()))
                .field("system", game.name())
                .field("depth", f.strategy.depth())
                .field("leaves", v.leaves)
                .field("proof_size", p.size())
                .with(Artifact::Json(f.to_json())))
        }
        Command::StrategyToProof { strategy, pipeline } => {
            let f = load_strategy(&strategy)?;
            let base = f.initial.iter().all(|(q, _)| q.as_base().is_some());
            let pipe = pipeline.unwrap_or(if f.system == System::NB && base { Pipeline::Nondet } else { Pipeline::Det });
            let g = match pipe {
                Pipeline::Det => strategy_to_proof_det(&f.strategy, &f.initial, &f.axioms)?,
                Pipeline::Nondet => strategy_to_proof_nondet(&f.strategy, &f.initial, &f.axioms)?,
            };
            generated(&g)
        }
        Command::Dualize { proof, formula, same_sequent } => match (proof, formula) {
            (Some(path), None) => {
                let (p, _) = load_proof(&path, None)?;
                let g = if same_sequent { coelndt_to_elndt(&p)? } else { dualize_proof(&p)? };
                let ratio = g.proof.len() as f64 / p.len().max(1) as f64;
                let mut o = generated(&g)?.field("input_lines", p.len()).field("ratio", ratio);
                o.summary.push_str(&format!(" ({ratio:.2}x the input)"));
                Ok(o)
            }
            (None, Some(text)) => {
                let u = parse_formula(&text)?;
                let (neg, axioms) = negate_coendt(u, &e)?;
                let mut names = file_namer(&axioms, [u]);
                let r = render_formula(neg, &mut names);
                let body = render_axioms(&axioms, &mut names);
                Ok(Outcome::new(true, format!("negation of {text}: {r}")).field("negation", r.clone()).with(Artifact::Text(format!("# negation {r}\n{body}"))))
            }
            _ => Err(CliError::Usage("give exactly one of --proof and --formula".into())),
        },
        Command::CollapseEafdt { proof, k } => {
            let (p, _) = load_proof(&proof, None)?;
            match k {
                Some(k) => generated(&prove_k_sequent(&p, k)?),
                None => generated(&collapse_eafdt(&p)?),
            }
        }
        Command::Play { strategy, answers } => {
            let f = load_strategy(&strategy)?;
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let script = answers.as_deref().map(bits).transpose()?;
            let mut it = script.iter().flatten();
            let mut adversary = |q: Query| -> Result<bool, GameError> {
                match &script {
                    Some(_) => it.next().copied().ok_or_else(|| GameError::Input(format!("no scripted answer left for {q}"))),
                    None => Ok(rng.gen_bool(0.5)),
                }
            };
            let t = play(&f.initial, &f.axioms, f.system, &f.strategy, &mut adversary)?;
            let leaves = f.strategy.queries().into_iter().flat_map(|q| q.leaves());
            let mut names = file_namer(&f.axioms, leaves.chain(f.initial.iter().flat_map(|(q, _)| q.leaves())));
            let text = t.render(&mut names);
            let won = t.won();
            Ok(Outcome::new(won.is_some(), text.trim_end())
                .field("won", won.map(|k| k.to_string()))
                .field("rounds", t.rounds())
                .field("transcript", text.lines().collect::<Vec<_>>()))
        }
        Command::Bench { family, from, to } => {
            let rows = bench::run_family(&family, from..=to).map_err(CliError::Usage)?;
            let csv = bench::to_csv(&rows).map_err(CliError::Usage)?;
            let json_rows: Vec<Value> = rows.iter().map(|r| serde_json::to_value(r).expect("serializable")).collect();
            Ok(Outcome::new(true, "").field("rows", json_rows).with(Artifact::Text(csv)))
        }
    }
}

fn decider(d: &DeciderArgs, e: &ExtAxiomSet) -> CliResult<DeciderStore> {
    let bs = list_of(&d.list)?;
    if d.i >= bs.len() {
        return Err(CliError::Usage(format!("--i {} is out of range for a list of {}", d.i, bs.len())));
    }
    Ok(DeciderStore::build(bs, e.clone(), d.i, d.k, parse_formula(&d.a)?, parse_formula(&d.c)?)?)
}
