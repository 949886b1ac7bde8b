// SPDX-License-Identifier: Apache-2.0

//! Exhaustive ground truth that only calls `classify`.

use crate::error::{Error, Result};
use crate::tm::{BitInput, TsmModel};

const NEIGHBOURHOOD_LIMIT: u128 = 1_000_000;
const EQUIV_LIMIT: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub holds: bool,
    pub witness: Option<BitInput>,
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn neighbourhood_size(n: usize, eps: usize) -> u128 {
    (0..=eps.min(n)).map(|k| binomial(n as u128, k as u128)).sum()
}

/// Visits every bit vector within distance `eps` of `base`, by number of
/// flips and then lexicographically by flip positions; stops at the first
/// one `violates` accepts.
fn search_ball(
    base: &[bool],
    eps: usize,
    violates: &mut dyn FnMut(&[bool]) -> Result<bool>,
) -> Result<Option<Vec<bool>>> {
    let needed = neighbourhood_size(base.len(), eps);
    if needed > NEIGHBOURHOOD_LIMIT {
        return Err(Error::Budget {
            needed,
            limit: NEIGHBOURHOOD_LIMIT,
        });
    }
    fn rec(
        bits: &mut Vec<bool>,
        from: usize,
        left: usize,
        violates: &mut dyn FnMut(&[bool]) -> Result<bool>,
    ) -> Result<bool> {
        if left == 0 {
            return violates(bits);
        }
        for p in from..bits.len() {
            bits[p] = !bits[p];
            let hit = rec(bits, p + 1, left - 1, violates)?;
            if hit {
                return Ok(true);
            }
            bits[p] = !bits[p];
        }
        Ok(false)
    }
    let mut bits = base.to_vec();
    for k in 0..=eps.min(base.len()) {
        if rec(&mut bits, 0, k, violates)? {
            return Ok(Some(bits));
        }
    }
    Ok(None)
}

fn verdict(witness: Option<Vec<bool>>) -> OracleVerdict {
    OracleVerdict {
        holds: witness.is_none(),
        witness: witness.map(BitInput::new),
    }
}

pub fn brute_oracle_robust(m: &TsmModel, input: &BitInput, eps: usize) -> Result<OracleVerdict> {
    let label = m.classify(&input.bits)?;
    let w = search_ball(&input.bits, eps, &mut |j| Ok(m.classify(j)? != label))?;
    Ok(verdict(w))
}

pub fn brute_oracle_similar(m1: &TsmModel, m2: &TsmModel, input: &BitInput, eps: usize) -> Result<OracleVerdict> {
    if m1.n_vars() != m2.n_vars() {
        return Err(Error::Dimension {
            expected: m1.n_vars(),
            got: m2.n_vars(),
        });
    }
    m1.classify(&input.bits)?;
    let w = search_ball(&input.bits, eps, &mut |j| Ok(m1.classify(j)? != m2.classify(j)?))?;
    Ok(verdict(w))
}

pub fn brute_oracle_equiv(m1: &TsmModel, m2: &TsmModel) -> Result<OracleVerdict> {
    let n = m1.n_vars();
    if n != m2.n_vars() {
        return Err(Error::Dimension {
            expected: n,
            got: m2.n_vars(),
        });
    }
    let needed = 1u128.checked_shl(n as u32).unwrap_or(u128::MAX);
    if needed > EQUIV_LIMIT {
        return Err(Error::Budget {
            needed,
            limit: EQUIV_LIMIT,
        });
    }
    for mask in 0u64..1 << n {
        let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if m1.classify(&bits)? != m2.classify(&bits)? {
            return Ok(verdict(Some(bits)));
        }
    }
    Ok(verdict(None))
}
