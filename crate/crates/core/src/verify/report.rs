// SPDX-License-Identifier: Apache-2.0

//! Per-instance records and the solved / robust / time summary table.
//!
//! A record is one JSON object per line:
//!
//! ```text
//! {"property":"robustness","result":"FAILS","epsilon":1,"eta":null,
//!  "time_s":0.0012,"vars":341,"clauses":902,"counterexample_bits":"0110"}
//! ```
//!
//! `epsilon` is null for equivalence, `eta` is set only inside universal
//! checks, and `counterexample_bits` is null unless the result is FAILS.

use std::fmt::Write as _;

use serde::Serialize;

use super::{CheckResult, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub property: String,
    pub result: String,
    pub epsilon: Option<usize>,
    pub eta: Option<f64>,
    pub time_s: f64,
    pub vars: u32,
    pub clauses: usize,
    pub counterexample_bits: Option<String>,
}

impl Verdict {
    /// With `timing` off the time is written as 0 so reports are
    /// byte-reproducible.
    pub fn record(&self, eta: Option<f64>, timing: bool) -> VerdictRecord {
        VerdictRecord {
            property: self.kind.to_string(),
            result: self.result.to_string(),
            epsilon: self.epsilon,
            eta,
            time_s: if timing { self.solve_time.as_secs_f64() } else { 0.0 },
            vars: self.vars,
            clauses: self.clauses,
            counterexample_bits: self.counterexample.as_ref().map(|c| c.to_bit_string()),
        }
    }

    /// One-line text form, e.g. `robustness eps=1 FAILS vars=341 clauses=902 time=0.001s cex=0110`.
    pub fn to_text(&self, timing: bool) -> String {
        let mut s = self.kind.to_string();
        if let Some(e) = self.epsilon {
            write!(s, " eps={e}").unwrap();
        }
        write!(s, " {} vars={} clauses={}", self.result, self.vars, self.clauses).unwrap();
        if timing {
            write!(s, " time={:.3}s", self.solve_time.as_secs_f64()).unwrap();
        }
        if let Some(c) = &self.counterexample {
            write!(s, " cex={}", c.to_bit_string()).unwrap();
        }
        s
    }
}

impl VerdictRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// One ε row: how many instances the solver decided, how many of those
/// the property held on, and their mean solve time.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub eps: usize,
    pub solved: usize,
    pub holds: usize,
    pub avg_time: Option<f64>,
}

impl SummaryRow {
    pub fn from_verdicts(eps: usize, verdicts: &[Verdict]) -> Self {
        let solved: Vec<&Verdict> = verdicts.iter().filter(|v| v.result != CheckResult::Timeout).collect();
        let avg_time = (!solved.is_empty())
            .then(|| solved.iter().map(|v| v.solve_time.as_secs_f64()).sum::<f64>() / solved.len() as f64);
        Self {
            eps,
            solved: solved.len(),
            holds: solved.iter().filter(|v| v.holds()).count(),
            avg_time,
        }
    }
}

/// Renders
///
/// ```text
/// | 20 test instances                       |
/// | eps | solved | eps-robust | time (sec)  |
/// |   1 |     20 |         17 |       0.92  |
/// ```
///
/// `property` names the third column (`robust` or `similar`). The time
/// column shows `-` when timing is suppressed and `>= <timeout>` when no
/// instance was solved.
pub fn format_summary(
    instances: usize,
    property: &str,
    rows: &[SummaryRow],
    timing: bool,
    timeout_s: Option<f64>,
) -> String {
    let col = format!("eps-{property}");
    let header = format!("| eps | solved | {col} | time (sec) |");
    let width = header.chars().count();
    let banner = format!("{instances} test instances");
    let mut out = String::new();
    writeln!(out, "| {banner:<w$} |", w = width - 4).unwrap();
    writeln!(out, "{header}").unwrap();
    for r in rows {
        let time = match (timing, r.avg_time, timeout_s) {
            (false, _, _) => "-".to_string(),
            (true, Some(t), _) => format!("{t:.2}"),
            (true, None, Some(limit)) => format!(">= {limit}"),
            (true, None, None) => "-".to_string(),
        };
        writeln!(
            out,
            "| {:>3} | {:>6} | {:>w$} | {:>10} |",
            r.eps,
            r.solved,
            r.holds,
            time,
            w = col.len()
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::PropertyKind;
    use super::*;
    use crate::tm::BitInput;
    use std::time::Duration;

    fn v(result: CheckResult, ms: u64) -> Verdict {
        Verdict {
            kind: PropertyKind::Robustness,
            result,
            counterexample: (result == CheckResult::Fails).then(|| BitInput::from_bits(&[0, 1, 1])),
            epsilon: Some(1),
            solve_time: Duration::from_millis(ms),
            vars: 10,
            clauses: 20,
        }
    }

    #[test]
    fn json_record_fields() {
        let r = v(CheckResult::Fails, 250).record(Some(0.5), true);
        assert_eq!(
            r.to_json(),
            r#"{"property":"robustness","result":"FAILS","epsilon":1,"eta":0.5,"time_s":0.25,"vars":10,"clauses":20,"counterexample_bits":"011"}"#
        );
        let r = v(CheckResult::Holds, 250).record(None, false);
        assert_eq!(
            r.to_json(),
            r#"{"property":"robustness","result":"HOLDS","epsilon":1,"eta":null,"time_s":0.0,"vars":10,"clauses":20,"counterexample_bits":null}"#
        );
    }

    #[test]
    fn text_line() {
        assert_eq!(
            v(CheckResult::Fails, 1500).to_text(true),
            "robustness eps=1 FAILS vars=10 clauses=20 time=1.500s cex=011"
        );
        assert_eq!(v(CheckResult::Holds, 1).to_text(false), "robustness eps=1 HOLDS vars=10 clauses=20");
    }

    #[test]
    fn summary_table() {
        let vs = vec![
            v(CheckResult::Holds, 100),
            v(CheckResult::Fails, 300),
            v(CheckResult::Timeout, 5000),
        ];
        let row = SummaryRow::from_verdicts(1, &vs);
        assert_eq!((row.solved, row.holds), (2, 1));
        assert!((row.avg_time.unwrap() - 0.2).abs() < 1e-9);
        let none = SummaryRow::from_verdicts(3, &[v(CheckResult::Timeout, 1)]);
        let table = format_summary(3, "robust", &[row, none], true, Some(60.0));
        assert_eq!(
            table,
            "| 3 test instances                       |\n\
             | eps | solved | eps-robust | time (sec) |\n\
             |   1 |      2 |          1 |       0.20 |\n\
             |   3 |      0 |          0 |      >= 60 |\n"
        );
    }
}
