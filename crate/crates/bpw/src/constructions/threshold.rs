use super::{finish, sq, ConstructionError, GeneratedProof, PosAxiomStore, Result};
use crate::calculus::SystemId;
use crate::semantics::{truth_table, SemError};
use crate::syntax::{pvars_of, ExtAxiomSet, ExtVar, Formula, PVar, Sort};

/// Threshold programs `Thr(j,k)` over a fixed list `B₀..B_{N-1}`, true iff
/// at least `k` of `B_j..B_{N-1}` hold.
pub struct ThresholdStore {
    pub pos: PosAxiomStore,
    bs: Vec<Formula>,
}

/// Outcome of [`ThresholdStore::semantics_check`].
#[derive(Debug, Default)]
pub struct ThresholdReport {
    pub checked: usize,
    /// `(j, k, assignment index)` of each disagreement.
    pub mismatches: Vec<(usize, i64, u64)>,
}

impl ThresholdReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl ThresholdStore {
    pub fn new(bs: Vec<Formula>, base: ExtAxiomSet) -> ThresholdStore {
        ThresholdStore { pos: PosAxiomStore::new(base), bs }
    }

    pub fn with_pos(bs: Vec<Formula>, pos: PosAxiomStore) -> ThresholdStore {
        ThresholdStore { pos, bs }
    }

    pub fn n(&self) -> usize {
        self.bs.len()
    }

    pub fn bs(&self) -> &[Formula] {
        &self.bs
    }

    pub fn b(&self, j: usize) -> Formula {
        self.bs[j]
    }

    pub fn axioms(&self) -> &ExtAxiomSet {
        self.pos.axioms()
    }

    fn var(&self, j: usize, k: i64) -> ExtVar {
        ExtVar::gen(Sort::E, "thr", self.bs.clone(), vec![j as i64, k])
    }

    /// `Thr(j,k)`, defined on first use.
    pub fn thr(&mut self, j: usize, k: i64) -> Result<Formula> {
        let n = self.n();
        if j > n {
            return Err(ConstructionError::Range(format!("j = {j} > N = {n}")));
        }
        let v = self.var(j, k);
        if !self.pos.axioms().contains(v) {
            let def = if j == n {
                Formula::constant(k <= 0)
            } else {
                let hi = self.thr(j + 1, k)?;
                let lo = self.thr(j + 1, k - 1)?;
                self.pos.pdec(hi, self.bs[j], lo)?
            };
            self.pos.builder.axioms.ensure(v, def)?;
        }
        Ok(Formula::ext(v))
    }

    /// The positive decision defining `Thr(j,k)` for `j < N`, as a triple.
    fn step(&mut self, j: usize, k: i64) -> Result<(Formula, Formula, Formula)> {
        Ok((self.thr(j + 1, k)?, self.bs[j], self.thr(j + 1, k - 1)?))
    }

    fn ext(&mut self, f: Formula) -> Result<[usize; 2]> {
        Ok(self.pos.builder.ext_clauses(f.as_ext().expect("threshold variable"))?)
    }

    fn need_step(&self, j: usize) -> Result<()> {
        if j >= self.n() {
            return Err(ConstructionError::Range(format!("j = {j} must be below N = {}", self.n())));
        }
        Ok(())
    }

    /// `|- Thr(j,k)` for `k ≤ 0`.
    pub fn mono_zero(&mut self, j: usize, k: i64) -> Result<usize> {
        if k > 0 {
            return Err(ConstructionError::SideCondition(format!("mono_zero needs k ≤ 0, got {k}")));
        }
        let t = self.thr(j, k)?;
        let target = sq(&[], &[t]);
        if let Some(i) = self.pos.builder.lookup(&target) {
            return Ok(i);
        }
        let mut cl = self.ext(t)?.to_vec();
        if j == self.n() {
            cl.push(self.pos.builder.one_r());
        } else {
            let (a, b, c) = self.step(j, k)?;
            cl.push(self.pos.truth(a, b, c)?[2]);
            cl.push(self.mono_zero(j + 1, k)?);
        }
        Ok(self.pos.builder.derive(&target, &cl)?)
    }

    /// `Thr(j,k) |-` for `k > N - j`.
    pub fn mono_big(&mut self, j: usize, k: i64) -> Result<usize> {
        if k <= (self.n() - j.min(self.n())) as i64 {
            return Err(ConstructionError::SideCondition(format!("mono_big needs k > N - j, got j = {j}, k = {k}")));
        }
        let t = self.thr(j, k)?;
        let target = sq(&[t], &[]);
        if let Some(i) = self.pos.builder.lookup(&target) {
            return Ok(i);
        }
        let mut cl = self.ext(t)?.to_vec();
        if j == self.n() {
            cl.push(self.pos.builder.zero_l());
        } else {
            let (a, b, c) = self.step(j, k)?;
            cl.push(self.pos.truth(a, b, c)?[1]);
            cl.push(self.mono_big(j + 1, k)?);
            cl.push(self.mono_big(j + 1, k - 1)?);
        }
        Ok(self.pos.builder.derive(&target, &cl)?)
    }

    /// `Thr(j,k) |- Thr(j,k-1)`.
    pub fn mono_step(&mut self, j: usize, k: i64) -> Result<usize> {
        let hi = self.thr(j, k)?;
        let lo = self.thr(j, k - 1)?;
        let target = sq(&[hi], &[lo]);
        if let Some(i) = self.pos.builder.lookup(&target) {
            return Ok(i);
        }
        let cl = if j == self.n() {
            vec![if k - 1 <= 0 { self.mono_zero(j, k - 1)? } else { self.mono_big(j, k)? }]
        } else {
            let mut cl = vec![self.ext(hi)?[0], self.ext(lo)?[1]];
            let (a, b, c) = self.step(j, k)?;
            let t = self.pos.truth(a, b, c)?;
            cl.extend([t[0], t[1]]);
            let (a, b, c) = self.step(j, k - 1)?;
            let t = self.pos.truth(a, b, c)?;
            cl.extend([t[2], t[3]]);
            cl.push(self.mono_step(j + 1, k)?);
            cl.push(self.mono_step(j + 1, k - 1)?);
            cl
        };
        Ok(self.pos.builder.derive(&target, &cl)?)
    }

    /// The truth conditions, for `j < N`:
    ///
    /// 1. `B_j, Thr(j+1,k) |- Thr(j,k+1)`
    /// 2. `Thr(j+1,k) |- Thr(j,k)`
    /// 3. `Thr(j,k) |- Thr(j+1,k), B_j`
    /// 4. `Thr(j,k) |- Thr(j+1,k-1)`
    pub fn truth(&mut self, item: u8, j: usize, k: i64) -> Result<usize> {
        self.need_step(j)?;
        let bj = self.bs[j];
        let (target, cl) = match item {
            1 => {
                let (t, t1) = (self.thr(j, k + 1)?, self.thr(j + 1, k)?);
                let (a, b, c) = self.step(j, k + 1)?;
                (sq(&[bj, t1], &[t]), vec![self.ext(t)?[1], self.pos.truth(a, b, c)?[3]])
            }
            2 => {
                let (t, t1) = (self.thr(j, k)?, self.thr(j + 1, k)?);
                let (a, b, c) = self.step(j, k)?;
                (sq(&[t1], &[t]), vec![self.ext(t)?[1], self.pos.truth(a, b, c)?[2]])
            }
            3 => {
                let (t, t1) = (self.thr(j, k)?, self.thr(j + 1, k)?);
                let (a, b, c) = self.step(j, k)?;
                (sq(&[t], &[t1, bj]), vec![self.ext(t)?[0], self.pos.truth(a, b, c)?[0]])
            }
            4 => {
                let (t, t1) = (self.thr(j, k)?, self.thr(j + 1, k - 1)?);
                let (a, b, c) = self.step(j, k)?;
                let mut cl = vec![self.ext(t)?[0], self.pos.truth(a, b, c)?[1]];
                cl.push(self.mono_step(j + 1, k)?);
                (sq(&[t], &[t1]), cl)
            }
            _ => return Err(ConstructionError::Range(format!("truth item {item}"))),
        };
        if let Some(i) = self.pos.builder.lookup(&target) {
            return Ok(i);
        }
        Ok(self.pos.builder.derive(&target, &cl)?)
    }

    /// One lemma as a standalone eLNDT proof. `which` is one of
    /// `mono_zero`, `mono_big`, `mono_step`, `truth_1` .. `truth_4`.
    pub fn lemma(&mut self, which: &str, j: usize, k: i64) -> Result<GeneratedProof> {
        let root = match which {
            "mono_zero" => self.mono_zero(j, k)?,
            "mono_big" => self.mono_big(j, k)?,
            "mono_step" => self.mono_step(j, k)?,
            w => match w.strip_prefix("truth_").and_then(|d| d.parse::<u8>().ok()) {
                Some(item) => self.truth(item, j, k)?,
                None => return Err(ConstructionError::Other(format!("unknown threshold lemma {which}"))),
            },
        };
        Ok(finish(&self.pos.builder, root, SystemId::ELndt, format!("lemma=thresh_{which} j={j} k={k}")))
    }

    /// Exhaustively compares every `Thr(j,k)`, `k` in `ks`, with the
    /// counting function.
    pub fn semantics_check(&mut self, ks: std::ops::RangeInclusive<i64>) -> std::result::Result<ThresholdReport, SemError> {
        let n = self.n();
        let mut report = ThresholdReport::default();
        let mut thr = Vec::new();
        for j in 0..=n {
            for k in ks.clone() {
                let f = self.thr(j, k).map_err(|e| SemError::Class(e.to_string()))?;
                thr.push((j, k, f));
            }
        }
        let e = self.pos.axioms();
        let universe: Vec<PVar> = pvars_of(&self.bs, e);
        let btabs = self.bs.iter().map(|&b| truth_table(b, e, &universe)).collect::<std::result::Result<Vec<_>, _>>()?;
        for (j, k, f) in thr {
            let t = truth_table(f, e, &universe)?;
            for a in 0..t.len() {
                let count = btabs[j..].iter().filter(|bt| bt.get(a)).count() as i64;
                if t.get(a) != (count >= k) {
                    report.mismatches.push((j, k, a));
                }
            }
            report.checked += 1;
        }
        Ok(report)
    }
}
