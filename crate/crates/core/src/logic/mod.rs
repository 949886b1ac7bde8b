// SPDX-License-Identifier: Apache-2.0

//! Propositional formulas, cardinality counters, CNF conversion and DIMACS.

mod cnf;
mod counter;
mod dimacs;
mod formula;
mod pool;

pub use cnf::{assert_cnf, tseitin, Cnf, Tseitin};
pub use counter::{seq_counter, SeqCounter};
pub use dimacs::{format_solver_output, parse_dimacs, parse_solver_output, write_dimacs, SolverOutput};
pub use formula::{Assignment, Formula, Var};
pub use pool::VarPool;
