// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A propositional variable; ids start at 1 and match DIMACS ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn id(self) -> u32 {
        self.0
    }

    pub fn lit(self, value: bool) -> i32 {
        if value {
            self.0 as i32
        } else {
            -(self.0 as i32)
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Var(Var),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl From<Var> for Formula {
    fn from(v: Var) -> Self {
        Formula::Var(v)
    }
}

impl From<bool> for Formula {
    fn from(b: bool) -> Self {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }
}

impl Formula {
    pub fn var(v: Var) -> Self {
        Formula::Var(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: impl Into<Formula>) -> Self {
        Formula::Not(Box::new(f.into()))
    }

    pub fn and(fs: impl IntoIterator<Item = Formula>) -> Self {
        Formula::And(fs.into_iter().collect())
    }

    pub fn or(fs: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Or(fs.into_iter().collect())
    }

    pub fn implies(a: impl Into<Formula>, b: impl Into<Formula>) -> Self {
        Formula::Implies(Box::new(a.into()), Box::new(b.into()))
    }

    pub fn iff(a: impl Into<Formula>, b: impl Into<Formula>) -> Self {
        Formula::Iff(Box::new(a.into()), Box::new(b.into()))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(v) => {
                out.insert(*v);
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Var(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(v) => a.get(*v).ok_or(Error::Unassigned(v.0))?,
            Formula::Not(f) => !f.eval(a)?,
            Formula::And(fs) => {
                let mut all = true;
                for f in fs {
                    all &= f.eval(a)?;
                }
                all
            }
            Formula::Or(fs) => {
                let mut any = false;
                for f in fs {
                    any |= f.eval(a)?;
                }
                any
            }
            Formula::Implies(x, y) => !x.eval(a)? || y.eval(a)?,
            Formula::Iff(x, y) => x.eval(a)? == y.eval(a)?,
        })
    }

    /// Replaces every variable assigned in `partial` by its constant and
    /// folds the constants away from the affected connectives.
    pub fn substitute(&self, partial: &Assignment) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Var(v) => match partial.get(*v) {
                Some(b) => b.into(),
                None => self.clone(),
            },
            Formula::Not(f) => fold_not(f.substitute(partial)),
            Formula::And(fs) => fold_and(fs.iter().map(|f| f.substitute(partial))),
            Formula::Or(fs) => fold_or(fs.iter().map(|f| f.substitute(partial))),
            Formula::Implies(a, b) => {
                match (a.substitute(partial), b.substitute(partial)) {
                    (Formula::False, _) | (_, Formula::True) => Formula::True,
                    (Formula::True, b) => b,
                    (a, Formula::False) => fold_not(a),
                    (a, b) => Formula::implies(a, b),
                }
            }
            Formula::Iff(a, b) => match (a.substitute(partial), b.substitute(partial)) {
                (Formula::True, x) | (x, Formula::True) => x,
                (Formula::False, x) | (x, Formula::False) => fold_not(x),
                (a, b) => Formula::iff(a, b),
            },
        }
    }
}

fn fold_not(f: Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        f => Formula::not(f),
    }
}

fn fold_and(fs: impl Iterator<Item = Formula>) -> Formula {
    let mut kept = Vec::new();
    for f in fs {
        match f {
            Formula::True => {}
            Formula::False => return Formula::False,
            f => kept.push(f),
        }
    }
    match kept.len() {
        0 => Formula::True,
        1 => kept.pop().unwrap(),
        _ => Formula::And(kept),
    }
}

fn fold_or(fs: impl Iterator<Item = Formula>) -> Formula {
    let mut kept = Vec::new();
    for f in fs {
        match f {
            Formula::False => {}
            Formula::True => return Formula::True,
            f => kept.push(f),
        }
    }
    match kept.len() {
        0 => Formula::False,
        1 => kept.pop().unwrap(),
        _ => Formula::Or(kept),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, fs: &[Formula], op: &str, unit: &str) -> fmt::Result {
            if fs.is_empty() {
                return f.write_str(unit);
            }
            f.write_str("(")?;
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        }
        match self {
            Formula::True => f.write_str("1"),
            Formula::False => f.write_str("0"),
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Not(x) => write!(f, "¬{x}"),
            Formula::And(fs) => join(f, fs, "∧", "1"),
            Formula::Or(fs) => join(f, fs, "∨", "0"),
            Formula::Implies(a, b) => write!(f, "({a} → {b})"),
            Formula::Iff(a, b) => write!(f, "({a} ↔ {b})"),
        }
    }
}

/// A (possibly partial) truth assignment, dense over variable ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(var_count: u32) -> Self {
        Self {
            values: vec![None; var_count as usize + 1],
        }
    }

    pub fn set(&mut self, v: Var, value: bool) {
        let i = v.0 as usize;
        if i >= self.values.len() {
            self.values.resize(i + 1, None);
        }
        self.values[i] = Some(value);
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(v.0 as usize).copied().flatten()
    }

    /// Truth value of a signed DIMACS literal, if its variable is assigned.
    pub fn lit(&self, lit: i32) -> Option<bool> {
        self.get(Var(lit.unsigned_abs())).map(|b| b == (lit > 0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|b| (Var(i as u32), b)))
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        let mut a = Assignment::new();
        for (v, b) in iter {
            a.set(v, b);
        }
        a
    }
}
