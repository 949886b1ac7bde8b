// SPDX-License-Identifier: Apache-2.0

//! Propositional encoding ϱ(M) of a two-class TsM.
//!
//! ```text
//! v_{k,j} ↔ C^k(j)†                          k ∈ {+,−}, j ∈ 1..=n/2
//! ρ(Σ_j v_{k,j} ≥ n/2)                        one counter per polarity
//! o_j ↔ (r⁺_{n/2,j} → r⁻_{n/2,j})             j ∈ 1..=n/2
//! (⋀_j o_j) ↔ ¬o
//! ```
//!
//! The last row of each counter holds the unary tally of firing
//! monomials, so `⋀ o_j` states Σ C⁻ ≥ Σ C⁺ and `o` is true exactly when
//! the model outputs class 1. Writing the comparison with the positive
//! tally in the antecedent, and negating at the output, makes ties land
//! on class 0 as the classifier does.
//!
//! Variable tags: inputs are shared between models as `input:x<i>`;
//! everything else lives under the caller's `tag` (`<tag>:v:+:<j>`,
//! `<tag>:sc:-:r:<i>:<j>`, `<tag>:out:<j>`, `<tag>:out`).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logic::{assert_cnf, seq_counter, Assignment, Formula, SeqCounter, Var, VarPool};
use crate::solver::{Budget, Outcome, Solver};
use crate::tm::{BitInput, Monomial, TsmModel};

#[derive(Debug, Clone)]
pub struct TsmEncoding {
    pub formula: Formula,
    /// `x_1..=x_n`, indexed from 0.
    pub input_vars: Vec<Var>,
    pub output_var: Var,
    pub positive_votes: Vec<Var>,
    pub negative_votes: Vec<Var>,
    pub positive_counter: SeqCounter,
    pub negative_counter: SeqCounter,
    pub comparisons: Vec<Var>,
}

pub fn input_var(pool: &mut VarPool, i: usize) -> Var {
    pool.var(format!("input:x{i}"))
}

/// Allocates (or looks up) `x_1..=x_n` in order.
pub fn input_vars(pool: &mut VarPool, n: usize) -> Vec<Var> {
    (1..=n).map(|i| input_var(pool, i)).collect()
}

/// C(j)†: the monomial as a conjunction, `x̄` ↦ `¬x`; empty ↦ ⊤.
pub fn monomial_formula(m: &Monomial, xs: &[Var]) -> Formula {
    let mut lits: Vec<Formula> = m
        .literals()
        .map(|l| {
            let x = Formula::Var(xs[l.var as usize - 1]);
            if l.negated {
                Formula::not(x)
            } else {
                x
            }
        })
        .collect();
    match lits.len() {
        0 => Formula::True,
        1 => lits.pop().unwrap(),
        _ => Formula::And(lits),
    }
}

pub fn encode_tsm(m: &TsmModel, pool: &mut VarPool, tag: &str) -> TsmEncoding {
    encode_inner(m, pool, tag, None)
}

/// Encodes `m` next to an existing encoding `base` of `base_model`, reusing
/// its structure where the two agree: a monomial already present in
/// `base_model` keeps its vote variable, a polarity whose votes are a
/// permutation of the base's keeps the base counter, and when both counters
/// are kept so are the comparisons and the output. The returned formula
/// holds only the new definitions, so it must be conjoined with
/// `base.formula`.
///
/// Two copies of the same model thereby share one output variable, which
/// turns an otherwise hard miter into a trivial one.
pub fn encode_tsm_sharing(
    m: &TsmModel,
    pool: &mut VarPool,
    tag: &str,
    base_model: &TsmModel,
    base: &TsmEncoding,
) -> TsmEncoding {
    encode_inner(m, pool, tag, Some((base_model, base)))
}

fn same_multiset(a: &[Var], b: &[Var]) -> bool {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

fn encode_inner(m: &TsmModel, pool: &mut VarPool, tag: &str, base: Option<(&TsmModel, &TsmEncoding)>) -> TsmEncoding {
    let xs = input_vars(pool, m.n_vars());
    let half = m.half();
    let mut parts = Vec::new();

    let known: HashMap<&Monomial, Var> = match base {
        Some((bm, be)) => bm
            .negative()
            .iter()
            .zip(&be.negative_votes)
            .chain(bm.positive().iter().zip(&be.positive_votes))
            .map(|(mono, &v)| (mono, v))
            .collect(),
        None => HashMap::new(),
    };
    let mut votes = |sign: char, monomials: &[Monomial], pool: &mut VarPool| -> Vec<Var> {
        monomials
            .iter()
            .enumerate()
            .map(|(j, mono)| {
                if let Some(&v) = known.get(mono) {
                    return v;
                }
                let v = pool.var(format!("{tag}:v:{sign}:{}", j + 1));
                parts.push(Formula::iff(v, monomial_formula(mono, &xs)));
                v
            })
            .collect()
    };
    let negative_votes = votes('-', m.negative(), pool);
    let positive_votes = votes('+', m.positive(), pool);

    let mut counter = |votes: &[Var], sign: char, reuse: Option<(&[Var], &SeqCounter)>, pool: &mut VarPool| {
        if let Some((base_votes, c)) = reuse {
            if same_multiset(votes, base_votes) {
                return (c.clone(), true);
            }
        }
        let lits: Vec<Formula> = votes.iter().map(|&v| Formula::Var(v)).collect();
        let c = seq_counter(&lits, half, pool, &format!("{tag}:sc:{sign}"))
            .expect("model invariants guarantee a non-empty side");
        parts.push(c.formula.clone());
        (c, false)
    };
    let (positive_counter, pos_shared) = counter(
        &positive_votes,
        '+',
        base.map(|(_, e)| (e.positive_votes.as_slice(), &e.positive_counter)),
        pool,
    );
    let (negative_counter, neg_shared) = counter(
        &negative_votes,
        '-',
        base.map(|(_, e)| (e.negative_votes.as_slice(), &e.negative_counter)),
        pool,
    );

    let (comparisons, output_var) = match base {
        Some((_, e)) if pos_shared && neg_shared => (e.comparisons.clone(), e.output_var),
        _ => {
            let comparisons: Vec<Var> = (1..=half)
                .map(|j| {
                    let oj = pool.var(format!("{tag}:out:{j}"));
                    let pos = positive_counter.r(half, j);
                    let neg = negative_counter.r(half, j);
                    parts.push(Formula::iff(Formula::implies(pos, neg), oj));
                    oj
                })
                .collect();
            let output_var = pool.var(format!("{tag}:out"));
            let all = if comparisons.len() == 1 {
                Formula::Var(comparisons[0])
            } else {
                Formula::and(comparisons.iter().map(|&v| Formula::Var(v)))
            };
            parts.push(Formula::iff(all, Formula::not(output_var)));
            (comparisons, output_var)
        }
    };

    TsmEncoding {
        formula: Formula::And(parts),
        input_vars: xs,
        output_var,
        positive_votes,
        negative_votes,
        positive_counter,
        negative_counter,
        comparisons,
    }
}

/// Classification through the solver: 1 iff ϱ(M)[x→I] ∧ o is satisfiable.
pub fn classify_via_sat(m: &TsmModel, input: &BitInput, solver: &Solver) -> Result<u8> {
    if input.len() != m.n_vars() {
        return Err(Error::Dimension {
            expected: m.n_vars(),
            got: input.len(),
        });
    }
    let mut pool = VarPool::new();
    let enc = encode_tsm(m, &mut pool, "m");
    let fixed: Assignment = enc.input_vars.iter().copied().zip(input.bits.iter().copied()).collect();
    let f = Formula::and([enc.formula.substitute(&fixed), Formula::Var(enc.output_var)]);
    let cnf = assert_cnf(&f, &mut pool);
    match solver.solve(&cnf, &Budget::unlimited())?.outcome {
        Outcome::Sat(_) => Ok(1),
        Outcome::Unsat => Ok(0),
        Outcome::Timeout => Err(Error::Protocol(format!("{solver} gave up without a budget"))),
    }
}
