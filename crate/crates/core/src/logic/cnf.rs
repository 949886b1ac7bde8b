// SPDX-License-Identifier: Apache-2.0

use super::formula::{Assignment, Formula, Var};
use super::pool::VarPool;

/// Clauses of signed DIMACS literals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    pub clauses: Vec<Vec<i32>>,
    pub var_count: u32,
}

impl Cnf {
    pub fn new(var_count: u32) -> Self {
        Self {
            clauses: Vec::new(),
            var_count,
        }
    }

    pub fn add_clause(&mut self, clause: impl Into<Vec<i32>>) {
        let clause = clause.into();
        debug_assert!(clause.iter().all(|&l| l != 0));
        if let Some(m) = clause.iter().map(|l| l.unsigned_abs()).max() {
            self.var_count = self.var_count.max(m);
        }
        self.clauses.push(clause);
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// True iff every clause has a literal made true by `a`.
    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| a.lit(l) == Some(true)))
    }

    /// Index of the first clause `a` does not satisfy.
    pub fn first_unsatisfied(&self, a: &Assignment) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|&l| a.lit(l) == Some(true)))
    }
}

/// Tseitin conversion with full (two-sided) gate definitions, so every
/// assignment of the original variables extends uniquely to the gates.
/// Negation costs nothing: it flips the literal. `Implies` and `Iff` are
/// desugared here rather than in the AST.
pub struct Tseitin<'p> {
    pool: &'p mut VarPool,
    cnf: Cnf,
    true_lit: Option<i32>,
}

impl<'p> Tseitin<'p> {
    pub fn new(pool: &'p mut VarPool) -> Self {
        Self {
            pool,
            cnf: Cnf::new(0),
            true_lit: None,
        }
    }

    fn constant_true(&mut self) -> i32 {
        if let Some(l) = self.true_lit {
            return l;
        }
        let v = self.pool.var("const:true").lit(true);
        self.cnf.add_clause([v]);
        self.true_lit = Some(v);
        v
    }

    fn gate(&mut self) -> i32 {
        self.pool.fresh("ts").lit(true)
    }

    /// Literal equivalent to `f` under the clauses emitted so far.
    pub fn encode(&mut self, f: &Formula) -> i32 {
        match f {
            Formula::True => self.constant_true(),
            Formula::False => -self.constant_true(),
            Formula::Var(v) => v.lit(true),
            Formula::Not(g) => -self.encode(g),
            Formula::And(fs) => {
                let lits: Vec<i32> = fs.iter().map(|g| self.encode(g)).collect();
                self.and_gate(lits)
            }
            Formula::Or(fs) => {
                let lits: Vec<i32> = fs.iter().map(|g| -self.encode(g)).collect();
                -self.and_gate(lits)
            }
            Formula::Implies(a, b) => {
                let lits = vec![self.encode(a), -self.encode(b)];
                -self.and_gate(lits)
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let g = self.gate();
                self.cnf.add_clause([-g, -a, b]);
                self.cnf.add_clause([-g, a, -b]);
                self.cnf.add_clause([g, a, b]);
                self.cnf.add_clause([g, -a, -b]);
                g
            }
        }
    }

    fn and_gate(&mut self, lits: Vec<i32>) -> i32 {
        match lits.len() {
            0 => self.constant_true(),
            1 => lits[0],
            _ => {
                let g = self.gate();
                let mut long = Vec::with_capacity(lits.len() + 1);
                long.push(g);
                for &l in &lits {
                    self.cnf.add_clause([-g, l]);
                    long.push(-l);
                }
                self.cnf.add_clause(long);
                g
            }
        }
    }

    /// Adds `f` as a hard constraint; top-level conjunctions are split into
    /// separate assertions and `Iff` with a variable side is defined directly.
    pub fn assert(&mut self, f: &Formula) {
        match f {
            Formula::And(fs) => fs.iter().for_each(|g| self.assert(g)),
            Formula::True => {}
            Formula::Or(fs) => {
                let clause: Vec<i32> = fs.iter().map(|g| self.encode(g)).collect();
                self.cnf.add_clause(clause);
            }
            Formula::Iff(a, b) => match (a.as_ref(), b.as_ref()) {
                (Formula::Var(v), g) | (g, Formula::Var(v)) => self.define(v.lit(true), g),
                (Formula::Not(n), g) | (g, Formula::Not(n)) if matches!(**n, Formula::Var(_)) => {
                    let Formula::Var(v) = **n else { unreachable!() };
                    self.define(v.lit(false), g)
                }
                _ => {
                    let l = self.encode(f);
                    self.cnf.add_clause([l]);
                }
            },
            _ => {
                let l = self.encode(f);
                self.cnf.add_clause([l]);
            }
        }
    }

    /// Emits `out ↔ f`, using `out` itself as the gate of a top-level
    /// `And`/`Or` instead of introducing a fresh one.
    fn define(&mut self, out: i32, f: &Formula) {
        let (lits, negate) = match f {
            Formula::And(fs) if fs.len() > 1 => (fs.iter().map(|g| self.encode(g)).collect::<Vec<_>>(), false),
            Formula::Or(fs) if fs.len() > 1 => (fs.iter().map(|g| -self.encode(g)).collect(), true),
            _ => {
                let l = self.encode(f);
                self.cnf.add_clause([-out, l]);
                self.cnf.add_clause([out, -l]);
                return;
            }
        };
        let g = if negate { -out } else { out };
        let mut long = Vec::with_capacity(lits.len() + 1);
        long.push(g);
        for &l in &lits {
            self.cnf.add_clause([-g, l]);
            long.push(-l);
        }
        self.cnf.add_clause(long);
    }

    pub fn finish(mut self) -> Cnf {
        self.cnf.var_count = self.cnf.var_count.max(self.pool.len());
        self.cnf
    }
}

/// Equisatisfiable CNF for `f` plus its root variable: models of
/// `cnf ∧ root` project onto models of `f`, and every model of `f`
/// extends to one.
pub fn tseitin(f: &Formula, pool: &mut VarPool) -> (Cnf, Var) {
    let mut ts = Tseitin::new(pool);
    let lit = ts.encode(f);
    let root = if lit > 0 {
        Var(lit as u32)
    } else {
        let r = ts.gate();
        ts.cnf.add_clause([-r, lit]);
        ts.cnf.add_clause([r, -lit]);
        Var(r as u32)
    };
    (ts.finish(), root)
}

/// CNF whose models project exactly onto the models of `f` (every
/// top-level conjunct is asserted rather than wrapped in a root gate).
pub fn assert_cnf(f: &Formula, pool: &mut VarPool) -> Cnf {
    let mut ts = Tseitin::new(pool);
    ts.assert(f);
    ts.finish()
}
