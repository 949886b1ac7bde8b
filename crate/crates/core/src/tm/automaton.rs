// SPDX-License-Identifier: Apache-2.0

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Exclude,
    Include,
}

/// A two-action automaton with states `1..=2N`. States `1..=N` exclude the
/// literal, `N+1..=2N` include it.
///
/// Reward pushes the state deeper into its current action, penalty pushes it
/// toward the other action; both saturate at the ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TsetlinAutomaton {
    state: u32,
    half: u32,
}

impl TsetlinAutomaton {
    /// Starts at state `N`, the exclude state next to the boundary.
    pub fn new(half: u32) -> Self {
        assert!(half >= 1, "automaton needs at least one state per action");
        Self { state: half, half }
    }

    pub fn with_state(half: u32, state: u32) -> Self {
        assert!(half >= 1 && (1..=2 * half).contains(&state));
        Self { state, half }
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    pub fn half(&self) -> u32 {
        self.half
    }

    pub fn action(&self) -> Action {
        if self.state > self.half {
            Action::Include
        } else {
            Action::Exclude
        }
    }

    pub fn includes(&self) -> bool {
        self.action() == Action::Include
    }

    pub fn reward(&mut self) {
        match self.action() {
            Action::Include => self.state = (self.state + 1).min(2 * self.half),
            Action::Exclude => self.state = (self.state - 1).max(1),
        }
    }

    pub fn penalize(&mut self) {
        match self.action() {
            Action::Include => self.state -= 1,
            Action::Exclude => self.state += 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_excluding_at_boundary() {
        let ta = TsetlinAutomaton::new(5);
        assert_eq!(ta.state(), 5);
        assert_eq!(ta.action(), Action::Exclude);
    }

    #[test]
    fn reward_saturates() {
        let mut ta = TsetlinAutomaton::with_state(3, 1);
        ta.reward();
        assert_eq!(ta.state(), 1);
        let mut ta = TsetlinAutomaton::with_state(3, 6);
        ta.reward();
        assert_eq!(ta.state(), 6);
        let mut ta = TsetlinAutomaton::with_state(3, 3);
        ta.reward();
        assert_eq!(ta.state(), 2);
    }

    #[test]
    fn penalty_crosses_boundary() {
        let mut ta = TsetlinAutomaton::with_state(3, 3);
        ta.penalize();
        assert_eq!((ta.state(), ta.action()), (4, Action::Include));
        ta.penalize();
        assert_eq!((ta.state(), ta.action()), (3, Action::Exclude));
    }

    #[test]
    fn single_state_per_action() {
        let mut ta = TsetlinAutomaton::new(1);
        ta.penalize();
        assert_eq!(ta.state(), 2);
        ta.penalize();
        assert_eq!(ta.state(), 1);
        ta.reward();
        assert_eq!(ta.state(), 1);
    }

    proptest::proptest! {
        #[test]
        fn state_stays_in_range(half in 1u32..20, moves in proptest::collection::vec(proptest::bool::ANY, 0..200)) {
            let mut ta = TsetlinAutomaton::new(half);
            for reward in moves {
                if reward { ta.reward() } else { ta.penalize() }
                proptest::prop_assert!((1..=2 * half).contains(&ta.state()));
                proptest::prop_assert_eq!(ta.includes(), ta.state() > half);
            }
        }
    }
}
