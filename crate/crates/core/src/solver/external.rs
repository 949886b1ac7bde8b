// SPDX-License-Identifier: Apache-2.0

//! Runs an external solver on a DIMACS file.
//!
//! The CNF is written to `<temp dir>/tsmv-<pid>-<seq>.cnf`, where `seq`
//! counts calls within the process, and its path is appended as the last
//! argument. The file is removed once the process exits. Standard output
//! must follow the SAT-competition convention (`s ...` and `v ...` lines);
//! exit status is not interpreted. On timeout the process is killed.

use std::io::Read;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use super::{Budget, Outcome, SolveResult};
use crate::error::{Error, Result};
use crate::logic::{parse_solver_output, write_dimacs, Cnf, SolverOutput, Var};

static SEQ: AtomicU64 = AtomicU64::new(0);

/// A command line split on whitespace (no shell quoting).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalSolver {
    pub fn parse(cmd: &str) -> Result<Self> {
        let mut toks = cmd.split_whitespace().map(str::to_owned);
        let program = toks
            .next()
            .ok_or_else(|| Error::Config("empty solver command".into()))?;
        Ok(Self {
            program,
            args: toks.collect(),
        })
    }

    pub fn command_line(&self) -> String {
        std::iter::once(self.program.as_str())
            .chain(self.args.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

struct TempCnf(PathBuf);

impl Drop for TempCnf {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

pub fn solve_external(cnf: &Cnf, solver: &ExternalSolver, budget: &Budget) -> Result<SolveResult> {
    let start = Instant::now();
    let seq = SEQ.fetch_add(1, Ordering::Relaxed);
    let path = std::env::temp_dir().join(format!("tsmv-{}-{seq}.cnf", std::process::id()));
    std::fs::write(&path, write_dimacs(cnf)).map_err(|e| Error::io(&path, e))?;
    let file = TempCnf(path);

    let mut child = Command::new(&solver.program)
        .args(&solver.args)
        .arg(&file.0)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| Error::Launch {
            cmd: solver.command_line(),
            source,
        })?;

    let mut stdout = child.stdout.take().expect("piped");
    let reader = thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });

    let mut timed_out = false;
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) => {}
            Err(e) => {
                return Err(Error::Launch {
                    cmd: solver.command_line(),
                    source: e,
                })
            }
        }
        if budget.timeout.is_some_and(|t| start.elapsed() >= t) {
            let _ = child.kill();
            let _ = child.wait();
            timed_out = true;
            break;
        }
        thread::sleep(Duration::from_millis(2));
    }
    // After a kill, grandchildren may still hold the pipe open; the reader
    // is detached rather than joined so the timeout stays prompt.
    let outcome = if timed_out {
        drop(reader);
        Outcome::Timeout
    } else {
        let text = reader
            .join()
            .expect("reader thread")
            .map_err(|e| Error::Protocol(format!("reading solver output: {e}")))?;
        match parse_solver_output(&text)? {
            SolverOutput::Unsat => Outcome::Unsat,
            SolverOutput::Unknown => Outcome::Timeout,
            SolverOutput::Sat(mut model) => {
                for v in 1..=cnf.var_count {
                    if model.get(Var(v)).is_none() {
                        model.set(Var(v), false);
                    }
                }
                Outcome::Sat(model)
            }
        }
    };
    Ok(SolveResult {
        outcome,
        decisions: 0,
        conflicts: 0,
        wall_time: start.elapsed(),
    })
}
