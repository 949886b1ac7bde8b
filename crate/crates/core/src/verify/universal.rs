// SPDX-License-Identifier: Apache-2.0

//! (ε,η)-robustness and (ε,η)-similarity over a set of inputs.
//!
//! Each member is decided by its own SAT call and the robust ones are
//! counted. Folding the per-member checks into one satisfiability query
//! would need the UNSAT of each NotRob as a literal, which an existential
//! query cannot express.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use super::{check_robust, check_similar, CheckResult, UniversalResult, UniversalVerdict, Verdict};
use crate::error::{Error, Result};
use crate::solver::{Budget, Solver};
use crate::tm::{BitInput, TsmModel};

/// Maps `f` over `items` on up to `jobs` threads; the output is in input
/// order whatever the completion order.
pub fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut done: Vec<(usize, R)> = thread::scope(|s| {
        let workers: Vec<_> = (0..jobs)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(item) = items.get(i) else { break };
                        out.push((i, f(item)));
                    }
                    out
                })
            })
            .collect();
        workers.into_iter().flat_map(|w| w.join().expect("worker panicked")).collect()
    });
    done.sort_by_key(|(i, _)| *i);
    done.into_iter().map(|(_, r)| r).collect()
}

fn threshold(eta: f64, size: usize) -> Result<usize> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Config(format!("eta must lie in (0, 1], got {eta}")));
    }
    if size == 0 {
        return Err(Error::Config("the input set is empty".into()));
    }
    // the nudge keeps products such as 0.29 × 100 from flooring to 28
    Ok((eta * size as f64 + 1e-9).floor() as usize)
}

fn tally(verdicts: Vec<Verdict>, threshold: usize, eta: f64) -> UniversalVerdict {
    let robust_count = verdicts.iter().filter(|v| v.holds()).count();
    let timeouts = verdicts.iter().filter(|v| v.result == CheckResult::Timeout).count();
    let result = if robust_count >= threshold {
        UniversalResult::Holds
    } else if robust_count + timeouts < threshold {
        UniversalResult::Fails
    } else {
        UniversalResult::Inconclusive
    };
    UniversalVerdict {
        verdicts,
        robust_count,
        timeouts,
        threshold,
        eta,
        result,
    }
}

/// Holds when `m` is ε-robust on at least ⌊η|S|⌋ members of `set`.
pub fn check_universal_robust(
    m: &TsmModel,
    set: &[BitInput],
    eps: usize,
    eta: f64,
    solver: &Solver,
    budget: &Budget,
    jobs: usize,
) -> Result<UniversalVerdict> {
    let threshold = threshold(eta, set.len())?;
    let verdicts = parallel_map(set, jobs, |i| check_robust(m, i, eps, solver, budget))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(verdicts, threshold, eta))
}

/// Holds when `m1` and `m2` are ε-similar on at least ⌊η|S|⌋ members.
#[allow(clippy::too_many_arguments)]
pub fn check_universal_similar(
    m1: &TsmModel,
    m2: &TsmModel,
    set: &[BitInput],
    eps: usize,
    eta: f64,
    solver: &Solver,
    budget: &Budget,
    jobs: usize,
) -> Result<UniversalVerdict> {
    let threshold = threshold(eta, set.len())?;
    let verdicts = parallel_map(set, jobs, |i| check_similar(m1, m2, i, eps, solver, budget))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(verdicts, threshold, eta))
}
