// SPDX-License-Identifier: Apache-2.0

//! Robustness, equivalence and similarity of TsMs, decided by SAT.
//!
//! Each per-instance check builds a formula that is satisfiable exactly
//! when the property is violated, so UNSAT means HOLDS and a model is a
//! counterexample. Counterexamples are decoded from the input variables
//! only and re-checked against the classifier before they are reported.

mod oracle;
mod properties;
mod report;
mod universal;

pub use oracle::{brute_oracle_equiv, brute_oracle_robust, brute_oracle_similar, OracleVerdict};
pub use properties::{
    build_notrob, build_notsim, check_equivalence, check_robust, check_similar, PropertyFormula,
};
pub use report::{format_summary, SummaryRow, VerdictRecord};
pub use universal::{check_universal_robust, check_universal_similar, parallel_map};

use std::fmt;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::tm::BitInput;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Robustness,
    Equivalence,
    Similarity,
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyKind::Robustness => "robustness",
            PropertyKind::Equivalence => "equivalence",
            PropertyKind::Similarity => "similarity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckResult {
    Holds,
    Fails,
    Timeout,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckResult::Holds => "HOLDS",
            CheckResult::Fails => "FAILS",
            CheckResult::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: PropertyKind,
    pub result: CheckResult,
    /// Present iff `result == Fails`.
    pub counterexample: Option<BitInput>,
    pub epsilon: Option<usize>,
    pub solve_time: Duration,
    pub vars: u32,
    pub clauses: usize,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.result == CheckResult::Holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniversalResult {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for UniversalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UniversalResult::Holds => "HOLDS",
            UniversalResult::Fails => "FAILS",
            UniversalResult::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalVerdict {
    /// One verdict per member of the set, in input order.
    pub verdicts: Vec<Verdict>,
    pub robust_count: usize,
    pub timeouts: usize,
    pub threshold: usize,
    pub eta: f64,
    pub result: UniversalResult,
}

/// Number of positions where `a` and `b` differ.
pub fn hamming(a: &BitInput, b: &BitInput) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.bits.iter().zip(&b.bits).filter(|(x, y)| x != y).count())
}
