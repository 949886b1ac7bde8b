// SPDX-License-Identifier: Apache-2.0

//! Conflict-driven clause learning over two watched literals.
//!
//! By default branching is fully fixed: the lowest-numbered unassigned
//! variable is decided, positive phase first, and there are no restarts.
//! Runs are therefore reproducible across machines. `Branching::Vsids`
//! switches to activity-ordered decisions with phase saving and Luby
//! restarts.

use std::time::Instant;

use super::{Budget, Outcome, SolveResult};
use crate::logic::{Assignment, Cnf, Var};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Branching {
    #[default]
    Fixed,
    Vsids,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmbeddedConfig {
    pub branching: Branching,
}

type Lit = u32;

const UNDEF: i8 = 0;

#[inline]
fn var_of(l: Lit) -> usize {
    (l >> 1) as usize
}

#[inline]
fn from_dimacs(l: i32) -> Lit {
    ((l.unsigned_abs() - 1) << 1) | (l < 0) as u32
}

#[inline]
fn lit_value(assign: &[i8], l: Lit) -> i8 {
    let v = assign[var_of(l)];
    if l & 1 == 1 {
        -v
    } else {
        v
    }
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
}

/// Max-heap of variables ordered by activity.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        Self {
            heap: Vec::with_capacity(n),
            pos: vec![None; n],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn push(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.sift_up(i, act);
        }
    }

    fn better(a: usize, b: usize, act: &[f64]) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(v, self.heap[parent], act) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.pos[self.heap[i]] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && Self::better(self.heap[r], self.heap[l], act) {
                r
            } else {
                l
            };
            if !Self::better(self.heap[child], v, act) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i]] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

fn luby(mut x: u64) -> u64 {
    let (mut size, mut seq) = (1u64, 0u32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

struct Solver {
    config: EmbeddedConfig,
    n_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<usize>>,
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    next_var: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    phase: Vec<bool>,
    n_learnt: usize,
    max_learnt: usize,
    decisions: u64,
    conflicts: u64,
    propagations: u64,
}

enum Search {
    Sat,
    Unsat,
    Restart,
    Budget,
}

impl Solver {
    fn new(n_vars: usize, config: EmbeddedConfig) -> Self {
        let mut heap = VarHeap::new(n_vars);
        let activity = vec![0.0; n_vars];
        if config.branching == Branching::Vsids {
            for v in 0..n_vars {
                heap.push(v, &activity);
            }
        }
        Self {
            config,
            n_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n_vars],
            assign: vec![UNDEF; n_vars],
            level: vec![0; n_vars],
            reason: vec![None; n_vars],
            trail: Vec::with_capacity(n_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: vec![false; n_vars],
            next_var: 0,
            activity,
            var_inc: 1.0,
            heap,
            phase: vec![true; n_vars],
            n_learnt: 0,
            max_learnt: 0,
            decisions: 0,
            conflicts: 0,
            propagations: 0,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn value(&self, l: Lit) -> i8 {
        lit_value(&self.assign, l)
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = var_of(l);
        self.assign[v] = if l & 1 == 1 { -1 } else { 1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds an input clause at level 0. Returns false if the formula is
    /// already contradictory.
    fn add_input_clause(&mut self, raw: &[i32]) -> bool {
        let mut lits: Vec<Lit> = raw.iter().map(|&l| from_dimacs(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return true;
        }
        lits.retain(|&l| self.value(l) != -1);
        if lits.iter().any(|&l| self.value(l) == 1) {
            return true;
        }
        match lits.len() {
            0 => false,
            1 => {
                self.enqueue(lits[0], None);
                true
            }
            _ => {
                self.attach(Clause {
                    lits,
                    learnt: false,
                    deleted: false,
                    lbd: 0,
                });
                true
            }
        }
    }

    fn attach(&mut self, c: Clause) -> usize {
        let ci = self.clauses.len();
        self.watches[c.lits[0] as usize].push(ci);
        self.watches[c.lits[1] as usize].push(ci);
        if c.learnt {
            self.n_learnt += 1;
        }
        self.clauses.push(c);
        ci
    }

    /// Unit propagation; returns a conflicting clause if one arises.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let clause = &mut self.clauses[ci];
                if clause.deleted {
                    continue;
                }
                if clause.lits[0] == false_lit {
                    clause.lits.swap(0, 1);
                }
                let first = clause.lits[0];
                if lit_value(&self.assign, first) == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.lits.len() {
                    if lit_value(&self.assign, clause.lits[k]) != -1 {
                        clause.lits.swap(1, k);
                        self.watches[clause.lits[1] as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if lit_value(&self.assign, first) == -1 {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    let v = var_of(first);
                    self.assign[v] = if first & 1 == 1 { -1 } else { 1 };
                    self.level[v] = self.trail_lim.len() as u32;
                    self.reason[v] = Some(ci);
                    self.trail.push(first);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        if self.config.branching != Branching::Vsids {
            return;
        }
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut pending = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                let v = var_of(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var_of(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            self.seen[var_of(lit)] = false;
            p = Some(lit);
            pending -= 1;
            if pending == 0 {
                break;
            }
            confl = self.reason[var_of(lit)].expect("implied literal has a reason");
        }
        learnt[0] = p.unwrap() ^ 1;

        // drop literals implied by the rest of the clause
        let mut kept = vec![learnt[0]];
        for &l in &learnt[1..] {
            let redundant = match self.reason[var_of(l)] {
                None => false,
                Some(r) => self.clauses[r].lits[1..].iter().all(|&q| {
                    let v = var_of(q);
                    self.seen[v] || self.level[v] == 0
                }),
            };
            if !redundant {
                kept.push(l);
            }
        }
        for &l in &learnt[1..] {
            self.seen[var_of(l)] = false;
        }
        let mut learnt = kept;

        let mut bt = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[var_of(learnt[k])] > self.level[var_of(learnt[best])] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            bt = self.level[var_of(learnt[1])];
        }
        if self.config.branching == Branching::Vsids {
            self.var_inc /= 0.95;
        }
        (learnt, bt)
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var_of(l);
            self.assign[v] = UNDEF;
            self.reason[v] = None;
            self.phase[v] = l & 1 == 0;
            if v < self.next_var {
                self.next_var = v;
            }
            if self.config.branching == Branching::Vsids {
                self.heap.push(v, &self.activity);
            }
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        match self.config.branching {
            Branching::Fixed => {
                while self.next_var < self.n_vars && self.assign[self.next_var] != UNDEF {
                    self.next_var += 1;
                }
                (self.next_var < self.n_vars).then_some((self.next_var as Lit) << 1)
            }
            Branching::Vsids => {
                while let Some(v) = self.heap.pop(&self.activity) {
                    if self.assign[v] == UNDEF {
                        return Some(((v as Lit) << 1) | (!self.phase[v]) as Lit);
                    }
                }
                None
            }
        }
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|&l| self.level[var_of(l)]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn locked(&self, ci: usize) -> bool {
        let l = self.clauses[ci].lits[0];
        let v = var_of(l);
        self.value(l) == 1 && self.reason[v] == Some(ci)
    }

    /// Deletes the worse half of the long learnt clauses, by LBD.
    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&ci| {
                let c = &self.clauses[ci];
                c.learnt && !c.deleted && c.lits.len() > 2 && c.lbd > 2
            })
            .filter(|&ci| !self.locked(ci))
            .collect();
        cands.sort_by_key(|&ci| (std::cmp::Reverse(self.clauses[ci].lbd), std::cmp::Reverse(self.clauses[ci].lits.len()), ci));
        let drop = cands.len() / 2;
        for &ci in &cands[..drop] {
            let c = &mut self.clauses[ci];
            c.deleted = true;
            c.lits = Vec::new();
            self.n_learnt -= 1;
        }
        for ws in &mut self.watches {
            ws.retain(|&ci| !self.clauses[ci].deleted);
        }
    }

    fn search(&mut self, conflict_budget: Option<u64>, budget: &Budget, start: Instant) -> Search {
        let mut local_conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                local_conflicts += 1;
                if self.decision_level() == 0 {
                    return Search::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let lbd = self.lbd(&learnt);
                    let asserting = learnt[0];
                    let ci = self.attach(Clause {
                        lits: learnt,
                        learnt: true,
                        deleted: false,
                        lbd,
                    });
                    self.enqueue(asserting, Some(ci));
                }
                if budget.exhausted(self.conflicts, start) {
                    return Search::Budget;
                }
                if self.n_learnt >= self.max_learnt + self.trail.len() {
                    self.reduce_db();
                    self.max_learnt += self.max_learnt / 10;
                }
            } else {
                if conflict_budget.is_some_and(|b| local_conflicts >= b) {
                    self.cancel_until(0);
                    return Search::Restart;
                }
                if self.decisions.is_multiple_of(1024) && budget.exhausted(self.conflicts, start) {
                    return Search::Budget;
                }
                match self.pick_branch() {
                    None => return Search::Sat,
                    Some(l) => {
                        self.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }

    fn model(&self) -> Assignment {
        let mut a = Assignment::with_capacity(self.n_vars as u32);
        for v in 0..self.n_vars {
            a.set(Var(v as u32 + 1), self.assign[v] == 1);
        }
        a
    }
}

pub fn solve_embedded(cnf: &Cnf, budget: &Budget, config: EmbeddedConfig) -> SolveResult {
    let start = Instant::now();
    let n_vars = cnf
        .clauses
        .iter()
        .flatten()
        .map(|l| l.unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(cnf.var_count) as usize;
    let mut s = Solver::new(n_vars, config);
    s.max_learnt = (cnf.clauses.len() / 3).max(2000);
    let finish = |s: &Solver, outcome: Outcome| SolveResult {
        outcome,
        decisions: s.decisions,
        conflicts: s.conflicts,
        wall_time: start.elapsed(),
    };
    for c in &cnf.clauses {
        if !s.add_input_clause(c) {
            return finish(&s, Outcome::Unsat);
        }
    }
    let mut restart = 0u64;
    loop {
        let budget_here = match config.branching {
            Branching::Vsids => Some(100 * luby(restart)),
            Branching::Fixed => None,
        };
        match s.search(budget_here, budget, start) {
            Search::Sat => {
                let model = s.model();
                return finish(&s, Outcome::Sat(model));
            }
            Search::Unsat => return finish(&s, Outcome::Unsat),
            Search::Budget => return finish(&s, Outcome::Timeout),
            Search::Restart => restart += 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_sequence() {
        let got: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(got, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn dimacs_literal_codes() {
        assert_eq!(from_dimacs(1), 0);
        assert_eq!(from_dimacs(-1), 1);
        assert_eq!(from_dimacs(3), 4);
        assert_eq!(var_of(from_dimacs(-3)), 2);
    }
}
