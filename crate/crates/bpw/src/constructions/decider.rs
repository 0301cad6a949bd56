use std::collections::BTreeSet;

use super::{finish, sq, ConstructionError, GeneratedProof, Result, ThresholdStore};
use crate::calculus::SystemId;
use crate::syntax::{ExtAxiomSet, ExtVar, Formula, Sort};

/// The `k`-decider `dec(A, B_i^k, C)`: a positive program that decides `B_i`
/// correctly on inputs where exactly `k` of the `B`s are true.
///
/// Cells `D(j,c,b)` track the position `j`, the number `c` of true `B`s met
/// so far and the stored value `b` of `B_i`; only cells reachable from
/// `D(0,0,0)` are ever created.
pub struct DeciderStore {
    pub thr: ThresholdStore,
    i: usize,
    k: i64,
    a: Formula,
    c: Formula,
    cells: BTreeSet<(usize, i64, u8)>,
}

impl DeciderStore {
    pub fn new(thr: ThresholdStore, i: usize, k: i64, a: Formula, c: Formula) -> Result<DeciderStore> {
        if i >= thr.n() {
            return Err(ConstructionError::Range(format!("i = {i} must be below N = {}", thr.n())));
        }
        let mut d = DeciderStore { thr, i, k, a, c, cells: BTreeSet::new() };
        d.entry()?;
        d.reach();
        Ok(d)
    }

    /// Switches to the decider for `(i, k, A, C)` over the same `B`s and
    /// store, building it if needed; returns its entry cell.
    pub fn retarget(&mut self, i: usize, k: i64, a: Formula, c: Formula) -> Result<Formula> {
        if i >= self.n() {
            return Err(ConstructionError::Range(format!("i = {i} must be below N = {}", self.n())));
        }
        (self.i, self.k, self.a, self.c) = (i, k, a, c);
        let e = self.entry()?;
        self.reach();
        Ok(e)
    }

    /// Recomputes the set of cells reachable from the entry.
    fn reach(&mut self) {
        self.cells.clear();
        let mut stack = vec![(0usize, 0i64, 0u8)];
        while let Some((j, c, b)) = stack.pop() {
            if !self.cells.insert((j, c, b)) || j == self.n() {
                continue;
            }
            let flag = if j == self.i { 1 } else { b };
            stack.push((j + 1, c, b));
            stack.push((j + 1, c + 1, flag));
        }
    }

    /// Decider over `bs` with fresh stores.
    pub fn build(bs: Vec<Formula>, base: ExtAxiomSet, i: usize, k: i64, a: Formula, c: Formula) -> Result<DeciderStore> {
        DeciderStore::new(ThresholdStore::new(bs, base), i, k, a, c)
    }

    pub fn n(&self) -> usize {
        self.thr.n()
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn axioms(&self) -> &ExtAxiomSet {
        self.thr.axioms()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// `dec(A, B_i^k, C) = D(0,0,0)`.
    pub fn entry(&mut self) -> Result<Formula> {
        self.cell(0, 0, 0)
    }

    fn var(&self, j: usize, c: i64, b: u8) -> ExtVar {
        let mut fs = self.thr.bs().to_vec();
        fs.extend([self.a, self.c]);
        ExtVar::gen(Sort::E, "cell", fs, vec![self.i as i64, self.k, j as i64, c, b as i64])
    }

    /// The positive decision defining `D(j,c,b)` for `j < N`.
    fn step(&mut self, j: usize, c: i64, b: u8) -> Result<(Formula, Formula, Formula)> {
        let flag = if j == self.i { 1 } else { b };
        Ok((self.cell(j + 1, c, b)?, self.thr.b(j), self.cell(j + 1, c + 1, flag)?))
    }

    pub fn cell(&mut self, j: usize, c: i64, b: u8) -> Result<Formula> {
        let n = self.n();
        if j > n || b > 1 {
            return Err(ConstructionError::Range(format!("cell D({j},{c},{b})")));
        }
        if j <= self.i && b == 1 {
            return Err(ConstructionError::Range(format!("D({j},{c},1) is undefined for j ≤ i = {}", self.i)));
        }
        let v = self.var(j, c, b);
        if !self.axioms().contains(v) {
            let def = if j == n {
                match (c == self.k, b) {
                    (true, 0) => self.a,
                    (true, _) => self.c,
                    (false, _) => Formula::zero(),
                }
            } else {
                let (x, y, z) = self.step(j, c, b)?;
                self.thr.pos.pdec(x, y, z)?
            };
            self.thr.pos.builder.axioms.ensure(v, def)?;
        }
        Ok(Formula::ext(v))
    }

    fn ext(&mut self, f: Formula) -> Result<[usize; 2]> {
        Ok(self.thr.pos.builder.ext_clauses(f.as_ext().expect("variable"))?)
    }

    /// Clauses shared by every inductive step at `(j,c,b)` with threshold
    /// index `l`: both axioms of the cell, the truth conditions of its
    /// positive decision and the threshold truth conditions linking `j` and
    /// `j+1`.
    fn step_clauses(&mut self, j: usize, c: i64, b: u8, l: i64) -> Result<Vec<usize>> {
        let d = self.cell(j, c, b)?;
        let mut cl = self.ext(d)?.to_vec();
        let (x, y, z) = self.step(j, c, b)?;
        cl.extend(self.thr.pos.truth(x, y, z)?);
        cl.push(self.thr.truth(1, j, l)?);
        cl.push(self.thr.truth(2, j, l + 1)?);
        cl.push(self.thr.truth(3, j, l)?);
        cl.push(self.thr.truth(4, j, l)?);
        Ok(cl)
    }

    fn base_clauses(&mut self, c: i64, b: u8, l: i64) -> Result<Vec<usize>> {
        let n = self.n();
        let d = self.cell(n, c, b)?;
        let mut cl = self.ext(d)?.to_vec();
        for t in [self.thr.thr(n, l)?, self.thr.thr(n, l + 1)?] {
            cl.extend(self.ext(t)?);
        }
        let bld = &mut self.thr.pos.builder;
        cl.push(bld.zero_l());
        cl.push(bld.one_r());
        Ok(cl)
    }

    fn derive(&mut self, target: &crate::syntax::Sequent, cl: &[usize]) -> Result<usize> {
        Ok(self.thr.pos.builder.derive(target, cl)?)
    }

    /// `Thr(j,l), D(j,c,b) |- Thr(j,l+1)` when `l + c < k`.
    pub fn low_count(&mut self, j: usize, c: i64, b: u8, l: i64) -> Result<usize> {
        if l + c >= self.k {
            return Err(ConstructionError::SideCondition(format!("low_count needs l + c < k, got l={l} c={c} k={}", self.k)));
        }
        let target = sq(&[self.thr.thr(j, l)?, self.cell(j, c, b)?], &[self.thr.thr(j, l + 1)?]);
        if let Some(i) = self.thr.pos.builder.lookup(&target) {
            return Ok(i);
        }
        let cl = if j == self.n() {
            self.base_clauses(c, b, l)?
        } else {
            let flag = if j == self.i { 1 } else { b };
            let mut cl = self.step_clauses(j, c, b, l)?;
            cl.push(self.low_count(j + 1, c, b, l)?);
            cl.push(self.low_count(j + 1, c, b, l - 1)?);
            cl.push(self.low_count(j + 1, c + 1, flag, l - 1)?);
            cl
        };
        self.derive(&target, &cl)
    }

    fn after_target(&mut self, item: u8, j: usize, c: i64, l: i64) -> Result<crate::syntax::Sequent> {
        let (t0, t1) = (self.thr.thr(j, l)?, self.thr.thr(j, l + 1)?);
        let b = u8::from(item >= 3);
        let d = self.cell(j, c, b)?;
        let x = if b == 0 { self.a } else { self.c };
        Ok(if item % 2 == 1 { sq(&[t0, d], &[x, t1]) } else { sq(&[t0, x], &[d, t1]) })
    }

    /// For `i < j ≤ N` and `l + c = k`:
    ///
    /// 1. `Thr(j,l), D(j,c,0) |- A, Thr(j,l+1)`
    /// 2. `Thr(j,l), A |- D(j,c,0), Thr(j,l+1)`
    /// 3. `Thr(j,l), D(j,c,1) |- C, Thr(j,l+1)`
    /// 4. `Thr(j,l), C |- D(j,c,1), Thr(j,l+1)`
    pub fn after_flag(&mut self, item: u8, j: usize, c: i64, l: i64) -> Result<usize> {
        if !(1..=4).contains(&item) {
            return Err(ConstructionError::Range(format!("after_flag item {item}")));
        }
        if l + c != self.k || j <= self.i || j > self.n() {
            return Err(ConstructionError::SideCondition(format!(
                "after_flag needs l + c = k and i < j ≤ N, got j={j} c={c} l={l}"
            )));
        }
        let target = self.after_target(item, j, c, l)?;
        if let Some(i) = self.thr.pos.builder.lookup(&target) {
            return Ok(i);
        }
        let b = u8::from(item >= 3);
        let cl = if j == self.n() {
            self.base_clauses(c, b, l)?
        } else {
            let mut cl = self.step_clauses(j, c, b, l)?;
            cl.push(self.after_flag(item, j + 1, c, l)?);
            cl.push(self.after_flag(item, j + 1, c + 1, l - 1)?);
            if item % 2 == 1 {
                cl.push(self.low_count(j + 1, c, b, l - 1)?);
            }
            cl
        };
        self.derive(&target, &cl)
    }

    fn before_target(&mut self, item: u8, j: usize, c: i64, l: i64) -> Result<crate::syntax::Sequent> {
        let (t0, t1) = (self.thr.thr(j, l)?, self.thr.thr(j, l + 1)?);
        let d = self.cell(j, c, 0)?;
        let bi = self.thr.b(self.i);
        let (a, cc) = (self.a, self.c);
        Ok(match item {
            1 => sq(&[t0, d], &[a, bi, t1]),
            2 => sq(&[t0, a], &[bi, d, t1]),
            3 => sq(&[t0, d, bi], &[cc, t1]),
            _ => sq(&[t0, bi, cc], &[d, t1]),
        })
    }

    /// For `j ≤ i` and `l + c = k`:
    ///
    /// 1. `Thr(j,l), D(j,c,0) |- A, B_i, Thr(j,l+1)`
    /// 2. `Thr(j,l), A |- B_i, D(j,c,0), Thr(j,l+1)`
    /// 3. `Thr(j,l), D(j,c,0), B_i |- C, Thr(j,l+1)`
    /// 4. `Thr(j,l), B_i, C |- D(j,c,0), Thr(j,l+1)`
    pub fn before_flag(&mut self, item: u8, j: usize, c: i64, l: i64) -> Result<usize> {
        if !(1..=4).contains(&item) {
            return Err(ConstructionError::Range(format!("before_flag item {item}")));
        }
        if l + c != self.k || j > self.i {
            return Err(ConstructionError::SideCondition(format!(
                "before_flag needs l + c = k and j ≤ i, got j={j} c={c} l={l}"
            )));
        }
        let target = self.before_target(item, j, c, l)?;
        if let Some(i) = self.thr.pos.builder.lookup(&target) {
            return Ok(i);
        }
        let mut cl = self.step_clauses(j, c, 0, l)?;
        if j == self.i {
            match item {
                1 | 2 => cl.push(self.after_flag(item, j + 1, c, l)?),
                _ => {
                    cl.push(self.after_flag(item, j + 1, c + 1, l - 1)?);
                    cl.push(self.low_count(j + 1, c, 0, l - 1)?);
                }
            }
        } else {
            cl.push(self.before_flag(item, j + 1, c, l)?);
            cl.push(self.before_flag(item, j + 1, c + 1, l - 1)?);
            cl.push(self.low_count(j + 1, c, 0, l - 1)?);
        }
        self.derive(&target, &cl)
    }

    /// Lines for the four sequents
    ///
    /// * `Thr_k, dec(A,B_i^k,C) |- A, B_i, Thr_{k+1}`
    /// * `Thr_k, A |- B_i, dec(A,B_i^k,C), Thr_{k+1}`
    /// * `Thr_k, dec(A,B_i^k,C), B_i |- C, Thr_{k+1}`
    /// * `Thr_k, B_i, C |- dec(A,B_i^k,C), Thr_{k+1}`
    pub fn immszel_lines(&mut self) -> Result<[usize; 4]> {
        let k = self.k;
        Ok([self.before_flag(1, 0, 0, k)?, self.before_flag(2, 0, 0, k)?, self.before_flag(3, 0, 0, k)?, self.before_flag(4, 0, 0, k)?])
    }

    pub fn immszel_proofs(&mut self) -> Result<[GeneratedProof; 4]> {
        let lines = self.immszel_lines()?;
        let (i, k) = (self.i, self.k);
        let b = &self.thr.pos.builder;
        Ok([1, 2, 3, 4].map(|item| finish(b, lines[item - 1], SystemId::ELndt, format!("theorem=immszel_{item} i={i} k={k}"))))
    }

    /// One lemma as a standalone proof; `which` is `low_count`,
    /// `after_flag_1` .. `after_flag_4` or `before_flag_1` .. `before_flag_4`.
    pub fn lemma(&mut self, which: &str, j: usize, c: i64, b: u8, l: i64) -> Result<GeneratedProof> {
        let root = match which {
            "low_count" => self.low_count(j, c, b, l)?,
            w => {
                let (fam, item) = w
                    .rsplit_once('_')
                    .and_then(|(f, d)| Some((f, d.parse::<u8>().ok()?)))
                    .ok_or_else(|| ConstructionError::Other(format!("unknown decider lemma {which}")))?;
                match fam {
                    "after_flag" => self.after_flag(item, j, c, l)?,
                    "before_flag" => self.before_flag(item, j, c, l)?,
                    _ => return Err(ConstructionError::Other(format!("unknown decider lemma {which}"))),
                }
            }
        };
        Ok(finish(
            &self.thr.pos.builder,
            root,
            SystemId::ELndt,
            format!("lemma=decider_{which} i={} k={} j={j} c={c} b={b} l={l}", self.i, self.k),
        ))
    }
}
