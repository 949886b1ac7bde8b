// SPDX-License-Identifier: Apache-2.0

//! Tsetlin Machines: automata, feedback, training and classification.

mod automaton;
mod feedback;
mod io;
mod model;
mod train;

pub use automaton::{Action, TsetlinAutomaton};
pub use feedback::{sample_type1, type1_probabilities, type2_outcome, Feedback, TaTeam};
pub use io::{load_model, model_from_str, model_to_string, save_model};
pub use model::{clip, BitInput, Hyperparams, Literal, Monomial, MulticlassModel, TsmModel};
pub use train::{accuracy, train, FeedbackGate, TrainConfig, Trainer};

#[cfg(test)]
pub(crate) use model::fixtures;
