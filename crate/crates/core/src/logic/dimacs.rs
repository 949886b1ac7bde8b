// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::cnf::Cnf;
use super::formula::{Assignment, Var};
use crate::error::{Error, Result};

pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut out = String::with_capacity(16 + cnf.clauses.len() * 12);
    writeln!(out, "p cnf {} {}", cnf.var_count, cnf.clauses.len()).unwrap();
    for clause in &cnf.clauses {
        for l in clause {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Reads DIMACS CNF. Comment lines (`c`) are skipped, clauses may span
/// lines, and the header counts are checked against the body.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    const WHAT: &str = "DIMACS";
    let mut header: Option<(u32, usize)> = None;
    let mut cnf = Cnf::new(0);
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(Error::parse(WHAT, ln, "duplicate header"));
            }
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let [fmt, vars, clauses] = toks[..] else {
                return Err(Error::parse(WHAT, ln, "expected `p cnf <vars> <clauses>`"));
            };
            if fmt != "cnf" {
                return Err(Error::parse(WHAT, ln, format!("unsupported format `{fmt}`")));
            }
            let vars = vars.parse().map_err(|_| Error::parse(WHAT, ln, "bad variable count"))?;
            let clauses = clauses.parse().map_err(|_| Error::parse(WHAT, ln, "bad clause count"))?;
            header = Some((vars, clauses));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(Error::parse(WHAT, ln, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| Error::parse(WHAT, ln, format!("bad literal `{tok}`")))?;
            if l == 0 {
                cnf.clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() > vars {
                return Err(Error::parse(WHAT, ln, format!("literal {l} exceeds {vars} variables")));
            } else {
                current.push(l);
            }
        }
    }
    let Some((vars, clauses)) = header else {
        return Err(Error::parse(WHAT, 1, "missing header"));
    };
    if !current.is_empty() {
        cnf.clauses.push(current);
    }
    if cnf.clauses.len() != clauses {
        return Err(Error::parse(
            WHAT,
            text.lines().count(),
            format!("header announces {clauses} clauses, found {}", cnf.clauses.len()),
        ));
    }
    cnf.var_count = vars;
    Ok(cnf)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverOutput {
    Sat(Assignment),
    Unsat,
    Unknown,
}

/// Parses SAT-competition output: one `s` status line plus `v` lines of
/// signed literals terminated by `0`. Other lines are ignored.
pub fn parse_solver_output(text: &str) -> Result<SolverOutput> {
    let mut status: Option<&str> = None;
    let mut model = Assignment::new();
    let mut terminated = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            if status.is_some() {
                return Err(Error::Protocol("more than one status line".into()));
            }
            status = Some(s.trim());
        } else if let Some(vs) = line.strip_prefix('v') {
            for tok in vs.split_whitespace() {
                let l: i32 = tok
                    .parse()
                    .map_err(|_| Error::Protocol(format!("bad literal `{tok}` in value line")))?;
                if l == 0 {
                    terminated = true;
                } else {
                    model.set(Var(l.unsigned_abs()), l > 0);
                }
            }
        }
    }
    match status {
        Some("SATISFIABLE") => {
            if !terminated {
                return Err(Error::Protocol("model not terminated by 0".into()));
            }
            Ok(SolverOutput::Sat(model))
        }
        Some("UNSATISFIABLE") => Ok(SolverOutput::Unsat),
        Some("UNKNOWN") => Ok(SolverOutput::Unknown),
        Some(other) => Err(Error::Protocol(format!("unknown status `{other}`"))),
        None => Err(Error::Protocol("no status line".into())),
    }
}

/// Competition-format output for `outcome`, `v` lines wrapped at ten
/// literals.
pub fn format_solver_output(outcome: &SolverOutput, var_count: u32) -> String {
    match outcome {
        SolverOutput::Unsat => "s UNSATISFIABLE\n".into(),
        SolverOutput::Unknown => "s UNKNOWN\n".into(),
        SolverOutput::Sat(a) => {
            let mut out = String::from("s SATISFIABLE\n");
            let lits: Vec<i32> = (1..=var_count)
                .map(|v| Var(v).lit(a.get(Var(v)).unwrap_or(false)))
                .collect();
            for chunk in lits.chunks(10) {
                out.push('v');
                for l in chunk {
                    write!(out, " {l}").unwrap();
                }
                out.push('\n');
            }
            out.push_str("v 0\n");
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_header_and_clauses() {
        let mut cnf = Cnf::new(2);
        cnf.add_clause([1, -2]);
        assert_eq!(write_dimacs(&cnf), "p cnf 2 1\n1 -2 0\n");
    }

    #[test]
    fn reads_back() {
        let mut cnf = Cnf::new(4);
        cnf.add_clause([1, -2]);
        cnf.add_clause([3]);
        cnf.add_clause([-4, 2, 1]);
        assert_eq!(parse_dimacs(&write_dimacs(&cnf)).unwrap(), cnf);
        let spread = "c hi\np cnf 3 2\n1 2\n -3 0 2\n0\n";
        let c = parse_dimacs(spread).unwrap();
        assert_eq!(c.clauses, vec![vec![1, 2, -3], vec![2]]);
    }

    #[test]
    fn rejects_bad_dimacs() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 3 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs("p dnf 2 1\n1 0\n").is_err());
        assert!(parse_dimacs("").is_err());
    }

    #[test]
    fn solver_output() {
        assert_eq!(parse_solver_output("s UNSATISFIABLE").unwrap(), SolverOutput::Unsat);
        let SolverOutput::Sat(a) = parse_solver_output("s SATISFIABLE\nv 1 -2 0").unwrap() else {
            panic!()
        };
        assert_eq!(a.get(Var(1)), Some(true));
        assert_eq!(a.get(Var(2)), Some(false));
        assert_eq!(
            parse_solver_output("c comment\ns UNKNOWN\n").unwrap(),
            SolverOutput::Unknown
        );
    }

    #[test]
    fn solver_output_errors() {
        assert!(parse_solver_output("").is_err());
        assert!(parse_solver_output("s MAYBE").is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv 1 2").is_err());
        assert!(parse_solver_output("s SATISFIABLE\nv 1 x 0").is_err());
        assert!(parse_solver_output("s SATISFIABLE\ns UNSATISFIABLE").is_err());
    }

    #[test]
    fn format_round_trip() {
        let a: Assignment = (1..=23).map(|v| (Var(v), v % 3 == 0)).collect();
        let text = format_solver_output(&SolverOutput::Sat(a.clone()), 23);
        assert_eq!(parse_solver_output(&text).unwrap(), SolverOutput::Sat(a));
    }

    proptest::proptest! {
        #[test]
        fn round_trip(
            n in 1u32..30,
            raw in proptest::collection::vec(proptest::collection::vec((1u32..30, proptest::bool::ANY), 0..6), 0..25),
        ) {
            let mut cnf = Cnf::new(n);
            for c in raw {
                cnf.add_clause(c.into_iter().map(|(v, pos)| {
                    let v = (v - 1) % n + 1;
                    if pos { v as i32 } else { -(v as i32) }
                }).collect::<Vec<_>>());
            }
            let back = parse_dimacs(&write_dimacs(&cnf)).unwrap();
            proptest::prop_assert_eq!(back.var_count, cnf.var_count);
            proptest::prop_assert_eq!(back.clauses, cnf.clauses);
        }
    }
}
