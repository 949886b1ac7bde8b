// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const TSMV: &str = env!("CARGO_BIN_EXE_tsmv");

const XOR: &str = "tsm v1 n=2 N=100 T=15 s=3.9\n+ 1,2\n+ ~1,~2\n- 1,~2\n- ~1,2\n";

fn tsmv(args: &[&str]) -> Output {
    Command::new(TSMV)
        .args(args)
        .env_remove("TSM_SOLVER")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn digits(name: &str) -> String {
    format!("{}/../core/tests/data/digits_3v8_{name}.csv", env!("CARGO_MANIFEST_DIR"))
}

/// A small model trained on the bundled digit set.
fn trained(dir: &Path, seed: &str) -> PathBuf {
    let out = dir.join(format!("digits-{seed}.tsm"));
    let o = tsmv(&[
        "train", "--data", &digits("train"), "--monomials", "20", "--states", "128", "--margin", "10",
        "--specificity", "5", "--epochs", "5", "--seed", seed, "--out", s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn missing_data_is_a_usage_error() {
    let o = tsmv(&["train", "--out", "x.tsm"]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--data"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&tsmv(&["--help"])), 0);
}

#[test]
fn training_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = trained(dir.path(), "3");
    let b = std::fs::read(&a).unwrap();
    std::fs::remove_file(&a).unwrap();
    let a = trained(dir.path(), "3");
    assert_eq!(std::fs::read(a).unwrap(), b);
}

#[test]
fn bad_hyperparameters_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.tsm");
    let o = tsmv(&["train", "--data", &digits("train"), "--monomials", "3", "--out", s(&out)]);
    assert_eq!(code(&o), 3);
    let o = tsmv(&["train", "--data", &digits("train"), "--specificity", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 3);
}

#[test]
fn xor_robustness_fails_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "xor.tsm", XOR);
    let inputs = write(dir.path(), "in.csv", "1,0\n");
    let o = tsmv(&["verify-robust", "--model", s(&m), "--input-file", s(&inputs), "--eps", "1"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("\"result\":\"FAILS\""), "{out}");
    assert!(
        out.contains("\"counterexample_bits\":\"00\"") || out.contains("\"counterexample_bits\":\"11\""),
        "{out}"
    );
}

#[test]
fn eps_zero_is_robust() {
    let dir = tempfile::tempdir().unwrap();
    let m = trained(dir.path(), "1");
    let o = tsmv(&[
        "verify-robust", "--model", s(&m), "--input-file", &digits("test"), "--limit", "5", "--eps", "0",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("|   0 |      5 |          5 |"), "{}", stdout(&o));
}

#[test]
fn self_equivalence_holds() {
    let dir = tempfile::tempdir().unwrap();
    let m = trained(dir.path(), "1");
    let o = tsmv(&["verify-equiv", "--model-a", s(&m), "--model-b", s(&m), "--timeout", "60"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("equivalence HOLDS"));
}

#[test]
fn xor_and_swapped_xor_differ() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.tsm", XOR);
    let b = write(dir.path(), "b.tsm", "tsm v1 n=2 N=100 T=15 s=3.9\n+ 1,~2\n+ ~1,2\n- 1,2\n- ~1,~2\n");
    assert_eq!(code(&tsmv(&["verify-equiv", "--model-a", s(&a), "--model-b", s(&b)])), 1);
    let inputs = write(dir.path(), "in.csv", "0,0\n1,0\n");
    let o = tsmv(&[
        "verify-sim", "--model-a", s(&a), "--model-b", s(&b), "--input-file", s(&inputs), "--eps", "0",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn deterministic_reports_ignore_job_count() {
    let dir = tempfile::tempdir().unwrap();
    let m = trained(dir.path(), "2");
    let run = |jobs: &str, report: &Path| {
        let o = tsmv(&[
            "verify-robust", "--model", s(&m), "--input-file", &digits("test"), "--limit", "8", "--eps", "1,2",
            "--jobs", jobs, "--deterministic", "--report", s(report),
        ]);
        assert!(code(&o) <= 1);
        let text = stdout(&o);
        assert_eq!(std::fs::read_to_string(report).unwrap(), text);
        text
    };
    let one = run("1", &dir.path().join("r1.txt"));
    let four = run("4", &dir.path().join("r4.txt"));
    assert_eq!(one, four);
    assert_eq!(one.lines().filter(|l| l.starts_with('{')).count(), 16);
    assert!(one.contains("\"time_s\":0.0"));
}

#[test]
fn universal_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m = trained(dir.path(), "1");
    let base = ["--model", s(&m), "--input-file", &digits("test"), "--limit", "6"];
    let args = |extra: &[&str]| {
        let mut a = vec!["verify-unirob"];
        a.extend(base);
        a.extend(extra);
        a.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    };
    let run = |extra: &[&str]| {
        let a = args(extra);
        tsmv(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let o = run(&["--eps", "0", "--eta", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("6 of 6 hold"), "{}", stdout(&o));
    // everything flips within the whole input space
    let o = run(&["--eps", "64", "--eta", "0.5"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let o = run(&["--eps", "1", "--eta", "1.5"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn classify_reports_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "xor.tsm", XOR);
    let data = write(dir.path(), "xor.csv", "0,0,1\n0,1,0\n1,0,0\n1,1,1\n");
    for extra in [&[][..], &["--via-sat"][..]] {
        let mut a = vec!["classify", "--model", s(&m), "--input-file", s(&data)];
        a.extend(extra);
        let o = tsmv(&a);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains("accuracy: 100.00% (4/4)"), "{}", stdout(&o));
    }
}

#[test]
fn dimension_mismatch_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "xor.tsm", XOR);
    let inputs = write(dir.path(), "in.csv", "1,0,1,1\n");
    let o = tsmv(&["verify-robust", "--model", s(&m), "--input-file", s(&inputs), "--eps", "1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("columns"));
}

#[test]
fn unknown_solver_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "xor.tsm", XOR);
    let inputs = write(dir.path(), "in.csv", "1,0\n");
    let o = tsmv(&[
        "verify-robust", "--model", s(&m), "--input-file", s(&inputs), "--eps", "1", "--solver", "glucose",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn encode_writes_dimacs_and_varmap() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "xor.tsm", XOR);
    let cnf = dir.path().join("xor.cnf");
    for assert in [None, Some("1"), Some("0")] {
        let mut a = vec!["encode", "--model", s(&m), "--out", s(&cnf)];
        if let Some(c) = assert {
            a.extend(["--assert-output", c]);
        }
        assert_eq!(code(&tsmv(&a)), 0);
        let text = std::fs::read_to_string(&cnf).unwrap();
        assert!(text.starts_with("p cnf "), "{text}");
        let map = std::fs::read_to_string(dir.path().join("varmap.txt")).unwrap();
        assert!(map.lines().any(|l| l == "input:x1 1"), "{map}");
        assert!(map.lines().any(|l| l.starts_with("m:out ")), "{map}");
        // XOR takes both classes, so either assertion is satisfiable
        assert_eq!(code(&tsmv(&["solve", s(&cnf)])), 10);
    }
}

#[test]
fn solve_follows_competition_output() {
    let dir = tempfile::tempdir().unwrap();
    let sat = write(dir.path(), "sat.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
    let o = tsmv(&["solve", s(&sat)]);
    assert_eq!(code(&o), 10);
    assert_eq!(stdout(&o), "s SATISFIABLE\nv -1 2\nv 0\n");
    let unsat = write(dir.path(), "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let o = tsmv(&["solve", "--vsids", s(&unsat)]);
    assert_eq!(code(&o), 20);
    assert_eq!(stdout(&o), "s UNSATISFIABLE\n");
}

#[test]
fn external_solver_agrees_with_embedded() {
    let dir = tempfile::tempdir().unwrap();
    let m = trained(dir.path(), "4");
    let external = format!("exec:{TSMV} solve");
    let run = |solver: &str| {
        let o = tsmv(&[
            "verify-robust", "--model", s(&m), "--input-file", &digits("test"), "--limit", "6", "--eps", "1",
            "--deterministic", "--solver", solver,
        ]);
        let results: Vec<String> = stdout(&o)
            .lines()
            .filter(|l| l.starts_with('{'))
            .map(|l| l.split("\"time_s\"").next().unwrap().to_string())
            .collect();
        (code(&o), results)
    };
    let (c1, embedded) = run("embedded");
    let (c2, exec) = run(&external);
    assert_eq!(c1, c2);
    assert_eq!(embedded, exec);
}

#[test]
fn solver_defaults_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "xor.tsm", XOR);
    let inputs = write(dir.path(), "in.csv", "1,0\n");
    let o = Command::new(TSMV)
        .args(["verify-robust", "--model", s(&m), "--input-file", s(&inputs), "--eps", "1"])
        .env("TSM_SOLVER", "nonsense")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonsense"));
}

#[test]
fn timeouts_are_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let m = trained(dir.path(), "1");
    let o = tsmv(&[
        "verify-unirob", "--model", s(&m), "--input-file", &digits("test"), "--limit", "4", "--eps", "3", "--eta",
        "0.5", "--timeout", "0.000001",
    ]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    assert!(stdout(&o).contains("INCONCLUSIVE"));
    let o = tsmv(&[
        "verify-robust", "--model", s(&m), "--input-file", &digits("test"), "--limit", "2", "--eps", "3",
        "--timeout", "0.000001",
    ]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
}
