// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A possibly negated reference to input variable `var` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn neg(var: u32) -> Self {
        Self { var, negated: true }
    }

    pub fn eval(self, input: &[bool]) -> bool {
        input[self.var as usize - 1] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~{}", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

/// Conjunction of literals. The empty monomial is true on every input.
///
/// A literal and its negation may both be present; such a monomial is
/// false everywhere and is kept as-is.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    literals: BTreeSet<Literal>,
}

impl Monomial {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Self {
        Self {
            literals: literals.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn literals(&self) -> impl ExactSizeIterator<Item = Literal> + '_ {
        self.literals.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.literals.iter().map(|l| l.var).max().unwrap_or(0)
    }

    pub fn eval(&self, input: &[bool]) -> bool {
        self.literals.iter().all(|l| l.eval(input))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("{}");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Training hyperparameters carried along with a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    /// States per action; each automaton has `2 * states` states.
    pub states: u32,
    /// Clipping margin for the vote sum.
    pub margin: u32,
    /// Specificity, must exceed 1.
    pub specificity: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            states: 100,
            margin: 15,
            specificity: 3.9,
        }
    }
}

/// A binary Tsetlin Machine: `positive` monomials vote for class 1,
/// `negative` ones for class 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TsmModel {
    n_vars: usize,
    positive: Vec<Monomial>,
    negative: Vec<Monomial>,
    pub hyperparams: Hyperparams,
}

impl TsmModel {
    pub fn new(
        n_vars: usize,
        positive: Vec<Monomial>,
        negative: Vec<Monomial>,
        hyperparams: Hyperparams,
    ) -> Result<Self> {
        if positive.len() != negative.len() {
            return Err(Error::Config(format!(
                "positive and negative halves differ in size ({} vs {})",
                positive.len(),
                negative.len()
            )));
        }
        if positive.is_empty() {
            return Err(Error::Config("a model needs at least one monomial per polarity".into()));
        }
        if n_vars == 0 {
            return Err(Error::Config("a model needs at least one input variable".into()));
        }
        for m in positive.iter().chain(&negative) {
            if let Some(l) = m.literals().find(|l| l.var == 0 || l.var as usize > n_vars) {
                return Err(Error::Config(format!(
                    "literal {l} outside input dimension {n_vars}"
                )));
            }
        }
        Ok(Self {
            n_vars,
            positive,
            negative,
            hyperparams,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Monomials per polarity (half the total count).
    pub fn half(&self) -> usize {
        self.positive.len()
    }

    pub fn positive(&self) -> &[Monomial] {
        &self.positive
    }

    pub fn negative(&self) -> &[Monomial] {
        &self.negative
    }

    /// Swaps the two polarities, yielding the complementary voter.
    pub fn swapped(&self) -> Self {
        Self {
            n_vars: self.n_vars,
            positive: self.negative.clone(),
            negative: self.positive.clone(),
            hyperparams: self.hyperparams,
        }
    }

    fn check_dim(&self, input: &[bool]) -> Result<()> {
        if input.len() != self.n_vars {
            return Err(Error::Dimension {
                expected: self.n_vars,
                got: input.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn votes_unchecked(&self, input: &[bool]) -> (i64, i64) {
        let count = |ms: &[Monomial]| ms.iter().filter(|m| m.eval(input)).count() as i64;
        (count(&self.positive), count(&self.negative))
    }

    /// Σ C⁻(input) − Σ C⁺(input).
    pub fn vote_margin(&self, input: &[bool]) -> Result<i64> {
        self.check_dim(input)?;
        let (pos, neg) = self.votes_unchecked(input);
        Ok(neg - pos)
    }

    /// Class 0 iff the negative votes are at least the positive votes.
    pub fn classify(&self, input: &[bool]) -> Result<u8> {
        Ok(if self.vote_margin(input)? >= 0 { 0 } else { 1 })
    }

    /// Average literal count per monomial.
    pub fn avg_literals(&self) -> f64 {
        let total: usize = self.positive.iter().chain(&self.negative).map(Monomial::len).sum();
        total as f64 / (2 * self.half()) as f64
    }
}

pub fn clip(v: i64, lo: i64, hi: i64) -> i64 {
    debug_assert!(lo <= hi);
    v.clamp(lo, hi)
}

/// An interpretation of the input variables, optionally labelled.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitInput {
    pub bits: Vec<bool>,
    pub label: Option<u8>,
}

impl BitInput {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits, label: None }
    }

    pub fn labeled(bits: Vec<bool>, label: u8) -> Self {
        Self {
            bits,
            label: Some(label),
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// One binary machine per class; the class with the largest
/// Σ C⁺ − Σ C⁻ wins, ties going to the lowest class id.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassModel {
    classes: Vec<(u32, TsmModel)>,
}

impl MulticlassModel {
    pub fn new(classes: Vec<(u32, TsmModel)>) -> Result<Self> {
        let Some((_, first)) = classes.first() else {
            return Err(Error::Config("multiclass model has no classes".into()));
        };
        let n = first.n_vars();
        if let Some((_, m)) = classes.iter().find(|(_, m)| m.n_vars() != n) {
            return Err(Error::Dimension {
                expected: n,
                got: m.n_vars(),
            });
        }
        Ok(Self { classes })
    }

    pub fn classes(&self) -> &[(u32, TsmModel)] {
        &self.classes
    }

    pub fn classify(&self, input: &[bool]) -> Result<u32> {
        let mut best: Option<(i64, u32)> = None;
        for (id, model) in &self.classes {
            let score = -model.vote_margin(input)?;
            best = match best {
                Some((s, b)) if s > score || (s == score && b < *id) => Some((s, b)),
                _ => Some((score, *id)),
            };
        }
        Ok(best.expect("non-empty by construction").1)
    }
}
