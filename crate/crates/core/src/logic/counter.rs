// SPDX-License-Identifier: Apache-2.0

//! Sequential counter for `Σ l_i ≥ K`.
//!
//! With auxiliaries `r[i][j]` over an `ℓ × K` grid the counter is the
//! conjunction of
//!
//! ```text
//! l_1 ↔ r_{1,1}
//! ¬r_{1,j}                                   j ∈ 2..=K
//! r_{i,1} ↔ (l_i ∨ r_{i-1,1})                i ∈ 2..=ℓ
//! r_{i,j} ↔ ((l_i ∧ r_{i-1,j-1}) ∨ r_{i-1,j}) i ∈ 2..=ℓ, j ∈ 2..=K
//! ```
//!
//! so `r_{i,j}` holds exactly when at least `j` of the first `i` inputs do.

use super::formula::{Formula, Var};
use super::pool::VarPool;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SeqCounter {
    pub formula: Formula,
    grid: Vec<Vec<Var>>,
}

impl SeqCounter {
    /// `r_{i,j}`, 1-based.
    pub fn r(&self, i: usize, j: usize) -> Var {
        self.grid[i - 1][j - 1]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn threshold(&self) -> usize {
        self.grid[0].len()
    }

    /// `r_{ℓ,K}`: true iff the sum reaches the threshold.
    pub fn output(&self) -> Var {
        *self.grid.last().unwrap().last().unwrap()
    }

    /// The last row `r_{ℓ,1..=K}`.
    pub fn last_row(&self) -> &[Var] {
        self.grid.last().unwrap()
    }

    pub fn grid(&self) -> &[Vec<Var>] {
        &self.grid
    }
}

/// Builds the counter over `lits`; grid variables are tagged
/// `<tag>:r:<i>:<j>` and allocated row by row.
pub fn seq_counter(lits: &[Formula], k: usize, pool: &mut VarPool, tag: &str) -> Result<SeqCounter> {
    if k < 1 {
        return Err(Error::Counter("threshold must be at least 1".into()));
    }
    if lits.is_empty() {
        return Err(Error::Counter("no literals to count".into()));
    }
    let grid: Vec<Vec<Var>> = (1..=lits.len())
        .map(|i| (1..=k).map(|j| pool.var(format!("{tag}:r:{i}:{j}"))).collect())
        .collect();
    let r = |i: usize, j: usize| Formula::Var(grid[i - 1][j - 1]);

    let mut parts = Vec::with_capacity(lits.len() * k);
    parts.push(Formula::iff(lits[0].clone(), r(1, 1)));
    for j in 2..=k {
        parts.push(Formula::not(r(1, j)));
    }
    for i in 2..=lits.len() {
        let li = &lits[i - 1];
        parts.push(Formula::iff(r(i, 1), Formula::or([li.clone(), r(i - 1, 1)])));
        for j in 2..=k {
            parts.push(Formula::iff(
                r(i, j),
                Formula::or([Formula::and([li.clone(), r(i - 1, j - 1)]), r(i - 1, j)]),
            ));
        }
    }
    Ok(SeqCounter {
        formula: Formula::And(parts),
        grid,
    })
}
