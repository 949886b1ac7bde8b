// SPDX-License-Identifier: Apache-2.0

//! Tsetlin machine training and SAT-based verification.
//!
//! A two-class TsM is a vote between two sets of monomials over Boolean
//! inputs. [`tm`] trains and evaluates such models, [`encode`] turns one
//! into an equisatisfiable propositional formula, and [`verify`] decides
//! robustness, equivalence and similarity with the solvers in [`solver`].

pub mod data;
pub mod encode;
pub mod error;
pub mod logic;
pub mod rng;
pub mod solver;
pub mod tm;
pub mod verify;

pub use encode::{classify_via_sat, encode_tsm, encode_tsm_sharing, TsmEncoding};
pub use error::{Error, Result};
pub use solver::{Budget, Solver};
pub use tm::{BitInput, TsmModel};
pub use verify::{CheckResult, UniversalResult, UniversalVerdict, Verdict};
