// SPDX-License-Identifier: Apache-2.0

//! Type I and Type II feedback over a team of automata.
//!
//! A team owns one automaton per literal of a single monomial: index `2i`
//! holds `x_{i+1}`, index `2i + 1` holds `¬x_{i+1}`.

use super::automaton::{Action, TsetlinAutomaton};
use super::model::{Literal, Monomial};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feedback {
    Reward,
    Inaction,
    Penalty,
}

/// `[P(reward), P(inaction), P(penalty)]` of the Type I table, or `None`
/// for the unreachable cell (an included literal that is 0 while the
/// monomial is 1).
pub fn type1_probabilities(action: Action, monomial: bool, literal: bool, s: f64) -> Option<[f64; 3]> {
    let hi = (s - 1.0) / s;
    let lo = 1.0 / s;
    Some(match (action, monomial, literal) {
        (Action::Include, true, true) => [hi, lo, 0.0],
        (Action::Include, true, false) => return None,
        (Action::Include, false, _) => [0.0, hi, lo],
        (Action::Exclude, true, true) => [0.0, lo, hi],
        (Action::Exclude, true, false) => [lo, hi, 0.0],
        (Action::Exclude, false, _) => [lo, hi, 0.0],
    })
}

/// Draws one Type I outcome from a single uniform variate.
pub fn sample_type1(
    action: Action,
    monomial: bool,
    literal: bool,
    s: f64,
    rng: &mut SplitMix64,
) -> Option<Feedback> {
    let [reward, inaction, _] = type1_probabilities(action, monomial, literal, s)?;
    let u = rng.next_f64();
    Some(if u < reward {
        Feedback::Reward
    } else if u < reward + inaction {
        Feedback::Inaction
    } else {
        Feedback::Penalty
    })
}

/// The Type II table is deterministic: only an excluded literal that is 0
/// inside a firing monomial is penalized (pushed toward Include).
pub fn type2_outcome(action: Action, monomial: bool, literal: bool) -> Feedback {
    match (action, monomial, literal) {
        (Action::Exclude, true, false) => Feedback::Penalty,
        _ => Feedback::Inaction,
    }
}

fn apply(ta: &mut TsetlinAutomaton, fb: Feedback) {
    match fb {
        Feedback::Reward => ta.reward(),
        Feedback::Penalty => ta.penalize(),
        Feedback::Inaction => {}
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaTeam {
    automata: Vec<TsetlinAutomaton>,
}

impl TaTeam {
    pub fn new(n_vars: usize, half: u32) -> Self {
        Self {
            automata: vec![TsetlinAutomaton::new(half); 2 * n_vars],
        }
    }

    pub fn from_automata(automata: Vec<TsetlinAutomaton>) -> Self {
        assert!(automata.len().is_multiple_of(2));
        Self { automata }
    }

    pub fn automata(&self) -> &[TsetlinAutomaton] {
        &self.automata
    }

    pub fn n_vars(&self) -> usize {
        self.automata.len() / 2
    }

    fn literal_of(k: usize) -> Literal {
        let var = (k / 2 + 1) as u32;
        if k.is_multiple_of(2) {
            Literal::pos(var)
        } else {
            Literal::neg(var)
        }
    }

    fn literal_value(k: usize, input: &[bool]) -> bool {
        input[k / 2] != (k % 2 == 1)
    }

    /// The monomial of all currently included literals.
    pub fn monomial(&self) -> Monomial {
        Monomial::new(
            self.automata
                .iter()
                .enumerate()
                .filter(|(_, ta)| ta.includes())
                .map(|(k, _)| Self::literal_of(k)),
        )
    }

    /// Value of the included literals' conjunction on `input` (true if none).
    pub fn eval(&self, input: &[bool]) -> bool {
        self.automata
            .iter()
            .enumerate()
            .all(|(k, ta)| !ta.includes() || Self::literal_value(k, input))
    }

    /// Every automaton draws exactly one variate, in index order.
    pub fn type1_feedback(&mut self, input: &[bool], s: f64, rng: &mut SplitMix64) {
        debug_assert_eq!(input.len(), self.n_vars());
        let fires = self.eval(input);
        for (k, ta) in self.automata.iter_mut().enumerate() {
            let lit = Self::literal_value(k, input);
            let fb = sample_type1(ta.action(), fires, lit, s, rng)
                .expect("an included literal is 1 whenever its monomial fires");
            apply(ta, fb);
        }
    }

    pub fn type2_feedback(&mut self, input: &[bool]) {
        debug_assert_eq!(input.len(), self.n_vars());
        let fires = self.eval(input);
        for (k, ta) in self.automata.iter_mut().enumerate() {
            let lit = Self::literal_value(k, input);
            apply(ta, type2_outcome(ta.action(), fires, lit));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type1_table_cells() {
        let s = 3.0;
        assert_eq!(
            type1_probabilities(Action::Include, true, true, s),
            Some([2.0 / 3.0, 1.0 / 3.0, 0.0])
        );
        assert_eq!(
            type1_probabilities(Action::Exclude, false, false, s),
            Some([1.0 / 3.0, 2.0 / 3.0, 0.0])
        );
        assert_eq!(type1_probabilities(Action::Include, true, false, s), None);
        for &(a, m, l) in &[
            (Action::Include, true, true),
            (Action::Include, false, true),
            (Action::Include, false, false),
            (Action::Exclude, true, true),
            (Action::Exclude, true, false),
            (Action::Exclude, false, true),
            (Action::Exclude, false, false),
        ] {
            let p = type1_probabilities(a, m, l, 3.9).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn type2_table() {
        assert_eq!(type2_outcome(Action::Exclude, true, false), Feedback::Penalty);
        for l in [false, true] {
            for m in [false, true] {
                assert_eq!(type2_outcome(Action::Include, m, l), Feedback::Inaction);
            }
            assert_eq!(type2_outcome(Action::Exclude, false, l), Feedback::Inaction);
        }
        assert_eq!(type2_outcome(Action::Exclude, true, true), Feedback::Inaction);
    }

    #[test]
    fn type2_penalizes_zero_literals_of_firing_monomial() {
        let mut team = TaTeam::new(2, 5);
        // empty monomial fires; x1=1, x2=0 -> literals ¬x1 (k=1) and x2 (k=2) are 0
        team.type2_feedback(&[true, false]);
        let states: Vec<u32> = team.automata().iter().map(|t| t.state()).collect();
        assert_eq!(states, vec![5, 6, 6, 5]);
        assert_eq!(team.monomial(), Monomial::new([Literal::neg(1), Literal::pos(2)]));
        // now the monomial is ¬x1·x2, false on (1,0): no change
        team.type2_feedback(&[true, false]);
        assert_eq!(team.automata().iter().map(|t| t.state()).collect::<Vec<_>>(), states);
    }

    #[test]
    fn monomial_reflects_include_states() {
        let half = 4;
        let team = TaTeam::from_automata(vec![
            TsetlinAutomaton::with_state(half, 5),
            TsetlinAutomaton::with_state(half, 4),
            TsetlinAutomaton::with_state(half, 1),
            TsetlinAutomaton::with_state(half, 8),
        ]);
        assert_eq!(team.monomial(), Monomial::new([Literal::pos(1), Literal::neg(2)]));
        assert!(team.eval(&[true, false]));
        assert!(!team.eval(&[true, true]));
    }

    proptest::proptest! {
        #[test]
        fn type2_never_moves_toward_exclude(
            states in proptest::collection::vec(1u32..=20, 6),
            input in proptest::collection::vec(proptest::bool::ANY, 3),
        ) {
            let mut team = TaTeam::from_automata(states.iter().map(|&s| TsetlinAutomaton::with_state(10, s)).collect());
            let before = team.clone();
            team.type2_feedback(&input);
            for (a, b) in before.automata().iter().zip(team.automata()) {
                proptest::prop_assert!(b.state() == a.state() || b.state() == a.state() + 1);
                // only an excluded literal can move, and only up to the boundary
                if b.state() != a.state() {
                    proptest::prop_assert!(!a.includes());
                }
            }
        }

        #[test]
        fn type1_moves_at_most_one_step(
            states in proptest::collection::vec(1u32..=20, 6),
            input in proptest::collection::vec(proptest::bool::ANY, 3),
            seed in proptest::prelude::any::<u64>(),
        ) {
            let mut team = TaTeam::from_automata(states.iter().map(|&s| TsetlinAutomaton::with_state(10, s)).collect());
            let before = team.clone();
            team.type1_feedback(&input, 3.9, &mut SplitMix64::new(seed));
            for (a, b) in before.automata().iter().zip(team.automata()) {
                proptest::prop_assert!(a.state().abs_diff(b.state()) <= 1);
                proptest::prop_assert!((1..=20).contains(&b.state()));
            }
        }
    }
}
