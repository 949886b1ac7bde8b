// SPDX-License-Identifier: Apache-2.0

//! SAT back ends: the embedded CDCL solver and external DIMACS processes.
//!
//! Every SAT answer is checked against the input CNF before it is returned,
//! whichever back end produced it.

mod embedded;
mod external;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use embedded::{solve_embedded, Branching, EmbeddedConfig};
pub use external::{solve_external, ExternalSolver};

use crate::error::{Error, Result};
use crate::logic::{Assignment, Cnf};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub timeout: Option<Duration>,
    pub conflict_limit: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn timeout(d: Duration) -> Self {
        Self {
            timeout: Some(d),
            conflict_limit: None,
        }
    }

    pub fn timeout_secs(secs: f64) -> Self {
        Self::timeout(Duration::from_secs_f64(secs))
    }

    pub(crate) fn exhausted(&self, conflicts: u64, start: Instant) -> bool {
        self.conflict_limit.is_some_and(|c| conflicts >= c)
            || self.timeout.is_some_and(|t| start.elapsed() >= t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(Assignment),
    Unsat,
    Timeout,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Sat(_))
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub decisions: u64,
    pub conflicts: u64,
    pub wall_time: Duration,
}

/// Which back end to run. Parses from `embedded`, `embedded:vsids` or
/// `exec:<command>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solver {
    Embedded(EmbeddedConfig),
    External(ExternalSolver),
}

impl Default for Solver {
    fn default() -> Self {
        Solver::Embedded(EmbeddedConfig::default())
    }
}

impl Solver {
    pub fn solve(&self, cnf: &Cnf, budget: &Budget) -> Result<SolveResult> {
        let res = match self {
            Solver::Embedded(cfg) => solve_embedded(cnf, budget, *cfg),
            Solver::External(ext) => solve_external(cnf, ext, budget)?,
        };
        if let Outcome::Sat(model) = &res.outcome {
            if let Some(i) = cnf.first_unsatisfied(model) {
                return Err(Error::Protocol(format!(
                    "{self} returned an assignment violating clause {} ({:?})",
                    i + 1,
                    cnf.clauses[i]
                )));
            }
        }
        Ok(res)
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solver::Embedded(EmbeddedConfig {
                branching: Branching::Fixed,
            }) => f.write_str("embedded"),
            Solver::Embedded(EmbeddedConfig {
                branching: Branching::Vsids,
            }) => f.write_str("embedded:vsids"),
            Solver::External(e) => write!(f, "exec:{}", e.command_line()),
        }
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "embedded" => Ok(Solver::Embedded(EmbeddedConfig::default())),
            "embedded:vsids" => Ok(Solver::Embedded(EmbeddedConfig {
                branching: Branching::Vsids,
            })),
            other => match other.strip_prefix("exec:") {
                Some(cmd) => Ok(Solver::External(ExternalSolver::parse(cmd)?)),
                None => Err(Error::Config(format!(
                    "unknown solver `{other}` (expected embedded, embedded:vsids or exec:<command>)"
                ))),
            },
        }
    }
}
