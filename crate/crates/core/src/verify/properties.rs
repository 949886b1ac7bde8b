// SPDX-License-Identifier: Apache-2.0

use super::{hamming, CheckResult, PropertyKind, Verdict};
use crate::encode::{encode_tsm, encode_tsm_sharing, input_vars};
use crate::error::{Error, Result};
use crate::logic::{assert_cnf, seq_counter, Assignment, Formula, Var, VarPool};
use crate::solver::{Budget, Outcome, Solver};
use crate::tm::{BitInput, TsmModel};

/// A violation formula together with the variables a counterexample is
/// read from.
#[derive(Debug, Clone)]
pub struct PropertyFormula {
    pub formula: Formula,
    pub input_vars: Vec<Var>,
    /// `l_1..=l_n`; empty for equivalence.
    pub flip_vars: Vec<Var>,
}

fn check_eps(eps: usize, n: usize) -> Result<()> {
    if eps > n {
        return Err(Error::Config(format!("epsilon {eps} exceeds the input dimension {n}")));
    }
    Ok(())
}

fn check_input(m: &TsmModel, input: &BitInput) -> Result<()> {
    if input.len() != m.n_vars() {
        return Err(Error::Dimension {
            expected: m.n_vars(),
            got: input.len(),
        });
    }
    Ok(())
}

fn check_pair(m1: &TsmModel, m2: &TsmModel) -> Result<()> {
    if m1.n_vars() != m2.n_vars() {
        return Err(Error::Dimension {
            expected: m1.n_vars(),
            got: m2.n_vars(),
        });
    }
    Ok(())
}

/// "At most ε flips" plus the flip biconditionals `x_j ↔ I[j] ⊕ l_j`.
/// The counter is stated as its definitions conjoined with `¬r_{n,ε+1}`;
/// with ε = n there is nothing to restrict and no counter is built.
fn flips(input: &BitInput, eps: usize, pool: &mut VarPool) -> (Vec<Formula>, Vec<Var>, Vec<Var>) {
    let n = input.len();
    let xs = input_vars(pool, n);
    let ls: Vec<Var> = (1..=n).map(|j| pool.var(format!("flip:l{j}"))).collect();
    let mut parts = Vec::new();
    if eps < n {
        let lits: Vec<Formula> = ls.iter().map(|&l| Formula::Var(l)).collect();
        let counter = seq_counter(&lits, eps + 1, pool, "flip:sc").expect("n ≥ 1 and ε+1 ≥ 1");
        let at_least = counter.output();
        parts.push(counter.formula);
        parts.push(Formula::not(at_least));
    }
    for (j, &bit) in input.bits.iter().enumerate() {
        let (i, l) = (Formula::from(bit), Formula::Var(ls[j]));
        parts.push(Formula::iff(
            xs[j],
            Formula::and([
                Formula::or([i.clone(), l.clone()]),
                Formula::or([Formula::not(i), Formula::not(l)]),
            ]),
        ));
    }
    (parts, xs, ls)
}

fn folded(parts: Vec<Formula>) -> Formula {
    Formula::And(parts).substitute(&Assignment::new())
}

/// NotRob(M, I, ε): satisfiable iff some J with H(I,J) ≤ ε has
/// M(J) ≠ M(I). Constants are folded.
pub fn build_notrob(m: &TsmModel, input: &BitInput, eps: usize, pool: &mut VarPool) -> Result<PropertyFormula> {
    check_input(m, input)?;
    check_eps(eps, m.n_vars())?;
    let label = m.classify(&input.bits)? == 1;
    let (mut parts, xs, ls) = flips(input, eps, pool);
    let enc = encode_tsm(m, pool, "m");
    parts.push(enc.formula);
    parts.push(Formula::iff(label, Formula::not(enc.output_var)));
    Ok(PropertyFormula {
        formula: folded(parts),
        input_vars: xs,
        flip_vars: ls,
    })
}

/// NotSim(M₁, M₂, I, ε): satisfiable iff some J with H(I,J) ≤ ε has
/// M₁(J) ≠ M₂(J).
pub fn build_notsim(
    m1: &TsmModel,
    m2: &TsmModel,
    input: &BitInput,
    eps: usize,
    pool: &mut VarPool,
) -> Result<PropertyFormula> {
    check_pair(m1, m2)?;
    check_input(m1, input)?;
    check_eps(eps, m1.n_vars())?;
    let (mut parts, xs, ls) = flips(input, eps, pool);
    let e1 = encode_tsm(m1, pool, "m1");
    let e2 = encode_tsm_sharing(m2, pool, "m2", m1, &e1);
    parts.extend([e1.formula, e2.formula]);
    parts.push(Formula::iff(e1.output_var, Formula::not(e2.output_var)));
    Ok(PropertyFormula {
        formula: folded(parts),
        input_vars: xs,
        flip_vars: ls,
    })
}

fn build_noteq(m1: &TsmModel, m2: &TsmModel, pool: &mut VarPool) -> Result<PropertyFormula> {
    check_pair(m1, m2)?;
    let xs = input_vars(pool, m1.n_vars());
    let e1 = encode_tsm(m1, pool, "m1");
    let e2 = encode_tsm_sharing(m2, pool, "m2", m1, &e1);
    let parts = vec![
        e1.formula,
        e2.formula,
        Formula::iff(e1.output_var, Formula::not(e2.output_var)),
    ];
    Ok(PropertyFormula {
        formula: folded(parts),
        input_vars: xs,
        flip_vars: Vec::new(),
    })
}

/// Solves the violation formula; the closure re-checks a decoded
/// counterexample by direct evaluation.
fn decide(
    kind: PropertyKind,
    epsilon: Option<usize>,
    pf: PropertyFormula,
    mut pool: VarPool,
    solver: &Solver,
    budget: &Budget,
    revalidate: impl Fn(&BitInput) -> Result<bool>,
) -> Result<Verdict> {
    let cnf = assert_cnf(&pf.formula, &mut pool);
    let res = solver.solve(&cnf, budget)?;
    let (result, counterexample) = match res.outcome {
        Outcome::Unsat => (CheckResult::Holds, None),
        Outcome::Timeout => (CheckResult::Timeout, None),
        Outcome::Sat(a) => {
            let j = BitInput::new(pf.input_vars.iter().map(|&x| a.get(x).unwrap_or(false)).collect());
            if !revalidate(&j)? {
                return Err(Error::Protocol(format!(
                    "{kind} counterexample {} does not re-validate",
                    j.to_bit_string()
                )));
            }
            (CheckResult::Fails, Some(j))
        }
    };
    Ok(Verdict {
        kind,
        result,
        counterexample,
        epsilon,
        solve_time: res.wall_time,
        vars: cnf.var_count,
        clauses: cnf.num_clauses(),
    })
}

/// ε-robustness of `m` at `input`.
pub fn check_robust(m: &TsmModel, input: &BitInput, eps: usize, solver: &Solver, budget: &Budget) -> Result<Verdict> {
    let mut pool = VarPool::new();
    let pf = build_notrob(m, input, eps, &mut pool)?;
    let label = m.classify(&input.bits)?;
    decide(PropertyKind::Robustness, Some(eps), pf, pool, solver, budget, |j| {
        Ok(hamming(input, j)? <= eps && m.classify(&j.bits)? != label)
    })
}

/// Whether `m1` and `m2` agree on every input.
pub fn check_equivalence(m1: &TsmModel, m2: &TsmModel, solver: &Solver, budget: &Budget) -> Result<Verdict> {
    let mut pool = VarPool::new();
    let pf = build_noteq(m1, m2, &mut pool)?;
    decide(PropertyKind::Equivalence, None, pf, pool, solver, budget, |j| {
        Ok(m1.classify(&j.bits)? != m2.classify(&j.bits)?)
    })
}

/// Whether `m1` and `m2` agree on every input within distance ε of
/// `input` (including `input` itself).
pub fn check_similar(
    m1: &TsmModel,
    m2: &TsmModel,
    input: &BitInput,
    eps: usize,
    solver: &Solver,
    budget: &Budget,
) -> Result<Verdict> {
    let mut pool = VarPool::new();
    let pf = build_notsim(m1, m2, input, eps, &mut pool)?;
    decide(PropertyKind::Similarity, Some(eps), pf, pool, solver, budget, |j| {
        Ok(hamming(input, j)? <= eps && m1.classify(&j.bits)? != m2.classify(&j.bits)?)
    })
}
