// SPDX-License-Identifier: Apache-2.0

//! `tsmv`: train Tsetlin machines and verify them with a SAT solver.
//!
//! Verification commands exit with 0 when every checked property holds,
//! 1 when any fails, 2 when a result is inconclusive or timed out, and 3
//! on errors (64 for usage errors). `solve` follows the SAT-competition
//! convention instead: 10 for SAT, 20 for UNSAT, 0 for unknown.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tsmv_core::data::{load_binary_csv, parse_feature_csv};
use tsmv_core::logic::{assert_cnf, format_solver_output, parse_dimacs, write_dimacs, Formula, SolverOutput, VarPool};
use tsmv_core::solver::{Outcome, Solver};
use tsmv_core::tm::{accuracy, load_model, save_model, train, FeedbackGate, Hyperparams, TrainConfig};
use tsmv_core::verify::{
    check_equivalence, check_robust, check_similar, check_universal_robust, check_universal_similar, format_summary,
    parallel_map, SummaryRow,
};
use tsmv_core::{classify_via_sat, encode_tsm, BitInput, Budget, CheckResult, TsmModel, UniversalResult, UniversalVerdict, Verdict};

#[derive(Parser)]
#[command(name = "tsmv", version, about = "Tsetlin machine training and SAT-based verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a two-class machine on a labelled 0/1 CSV (label in the last column).
    Train(TrainArgs),
    /// Classify every row of a CSV.
    Classify(ClassifyArgs),
    /// Write the CNF of a model and a map from variable tags to DIMACS ids.
    Encode(EncodeArgs),
    /// Check ε-robustness of each input.
    VerifyRobust(RobustArgs),
    /// Check that at least a fraction η of the inputs are ε-robust.
    VerifyUnirob(UniRobustArgs),
    /// Check that two models classify every input alike.
    VerifyEquiv(EquivArgs),
    /// Check ε-similarity of two models around each input.
    VerifySim(SimArgs),
    /// Check that two models are ε-similar on at least a fraction η of the inputs.
    VerifyUnisim(UniSimArgs),
    /// Solve a DIMACS file with the embedded solver, printing competition output.
    Solve(SolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Gate {
    ClassSum,
    NegMinusPos,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    /// Optional held-out CSV to report accuracy on.
    #[arg(long)]
    test: Option<PathBuf>,
    /// Total number of monomials, split evenly between the two classes.
    #[arg(long, default_value_t = 100)]
    monomials: usize,
    /// States per action N.
    #[arg(long, default_value_t = 100)]
    states: u32,
    /// Vote clipping margin T.
    #[arg(long, default_value_t = 15)]
    margin: u32,
    /// Specificity s.
    #[arg(long, default_value_t = 3.9)]
    specificity: f64,
    #[arg(long, default_value_t = 50)]
    epochs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sign convention of the vote sum that gates feedback.
    #[arg(long, value_enum, default_value = "class-sum")]
    gate: Gate,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    /// CSV rows of n bits, optionally followed by a label column.
    #[arg(long)]
    input_file: PathBuf,
    /// Classify by solving the encoding instead of counting votes.
    #[arg(long)]
    via_sat: bool,
    #[arg(long, env = "TSM_SOLVER", default_value = "embedded")]
    solver: String,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    model: PathBuf,
    /// Output DIMACS file.
    #[arg(long)]
    out: PathBuf,
    /// Variable map; defaults to `varmap.txt` next to the DIMACS file.
    #[arg(long)]
    varmap: Option<PathBuf>,
    /// Also assert the model output (1: class 1, 0: class 0).
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    assert_output: Option<u8>,
}

#[derive(Args)]
struct VerifyOpts {
    /// `embedded`, `embedded:vsids` or `exec:<command>`.
    #[arg(long, env = "TSM_SOLVER", default_value = "embedded")]
    solver: String,
    /// Per-instance solver timeout in seconds; 0 disables it.
    #[arg(long, default_value_t = 300.0)]
    timeout: f64,
    /// Instances verified in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write 0 for all times so identical runs give identical reports.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct InstanceOpts {
    /// CSV rows of n bits, optionally followed by a label column.
    #[arg(long)]
    input_file: PathBuf,
    /// Only use the first N rows.
    #[arg(long)]
    limit: Option<usize>,
    /// One or more Hamming radii, e.g. `--eps 1,3,5`.
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<usize>,
}

#[derive(Args)]
struct RobustArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    instances: InstanceOpts,
    #[command(flatten)]
    opts: VerifyOpts,
}

#[derive(Args)]
struct UniRobustArgs {
    #[command(flatten)]
    inner: RobustArgs,
    #[arg(long)]
    eta: f64,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long)]
    model_a: PathBuf,
    #[arg(long)]
    model_b: PathBuf,
    #[command(flatten)]
    opts: VerifyOpts,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    model_a: PathBuf,
    #[arg(long)]
    model_b: PathBuf,
    #[command(flatten)]
    instances: InstanceOpts,
    #[command(flatten)]
    opts: VerifyOpts,
}

#[derive(Args)]
struct UniSimArgs {
    #[command(flatten)]
    inner: SimArgs,
    #[arg(long)]
    eta: f64,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long)]
    vsids: bool,
    /// Seconds before giving up with `s UNKNOWN`; 0 disables it.
    #[arg(long, default_value_t = 0.0)]
    timeout: f64,
}

/// How a verification run ended, ordered by exit-code precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Holds,
    Undecided,
    Fails,
}

impl Status {
    fn of(r: CheckResult) -> Self {
        match r {
            CheckResult::Holds => Status::Holds,
            CheckResult::Fails => Status::Fails,
            CheckResult::Timeout => Status::Undecided,
        }
    }

    fn of_universal(r: UniversalResult) -> Self {
        match r {
            UniversalResult::Holds => Status::Holds,
            UniversalResult::Fails => Status::Fails,
            UniversalResult::Inconclusive => Status::Undecided,
        }
    }

    fn exit_code(self) -> ExitCode {
        ExitCode::from(match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Undecided => 2,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 64 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Train(a) => cmd_train(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Encode(a) => cmd_encode(a),
        Command::VerifyRobust(a) => cmd_verify_robust(a, None),
        Command::VerifyUnirob(a) => cmd_verify_robust(a.inner, Some(a.eta)),
        Command::VerifyEquiv(a) => cmd_verify_equiv(a),
        Command::VerifySim(a) => cmd_verify_sim(a, None),
        Command::VerifyUnisim(a) => cmd_verify_sim(a.inner, Some(a.eta)),
        Command::Solve(a) => cmd_solve(a),
    }
}

fn load(path: &Path) -> Result<TsmModel> {
    load_model(path).with_context(|| format!("loading model {}", path.display()))
}

fn parse_solver(spec: &str) -> Result<Solver> {
    spec.parse().with_context(|| format!("solver `{spec}`"))
}

fn budget(timeout_s: f64) -> Result<Budget> {
    if !(timeout_s >= 0.0 && timeout_s.is_finite()) {
        bail!("timeout must be a non-negative number of seconds, got {timeout_s}");
    }
    Ok(if timeout_s == 0.0 {
        Budget::unlimited()
    } else {
        Budget::timeout(Duration::from_secs_f64(timeout_s))
    })
}

/// Rows of `n_vars` bits; a trailing extra column is taken as the label.
fn load_inputs(path: &Path, n_vars: usize, limit: Option<usize>) -> Result<Vec<BitInput>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows = parse_feature_csv(&text).with_context(|| format!("parsing {}", path.display()))?;
    let width = rows[0].len();
    let mut rows: Vec<BitInput> = if width == n_vars + 1 {
        rows.into_iter()
            .map(|r| {
                let (label, bits) = r.bits.split_last().unwrap();
                BitInput::labeled(bits.to_vec(), *label as u8)
            })
            .collect()
    } else if width == n_vars {
        rows
    } else {
        bail!(
            "{}: rows have {width} columns but the model takes {n_vars} inputs",
            path.display()
        );
    };
    if let Some(k) = limit {
        rows.truncate(k);
    }
    Ok(rows)
}

fn cmd_train(a: TrainArgs) -> Result<ExitCode> {
    let data = load_binary_csv(&a.data).with_context(|| format!("loading {}", a.data.display()))?;
    let config = TrainConfig {
        n_monomials: a.monomials,
        hyperparams: Hyperparams {
            states: a.states,
            margin: a.margin,
            specificity: a.specificity,
        },
        epochs: a.epochs,
        seed: a.seed,
        gate: match a.gate {
            Gate::ClassSum => FeedbackGate::ClassSum,
            Gate::NegMinusPos => FeedbackGate::NegMinusPos,
        },
    };
    let model = train(&data, &config)?;
    println!("train accuracy: {:.2}%", 100.0 * accuracy(&model, &data)?);
    if let Some(test) = &a.test {
        let test_data = load_binary_csv(test).with_context(|| format!("loading {}", test.display()))?;
        println!("test accuracy: {:.2}%", 100.0 * accuracy(&model, &test_data)?);
    }
    println!("average literals per monomial: {:.2}", model.avg_literals());
    save_model(&model, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(a: ClassifyArgs) -> Result<ExitCode> {
    let model = load(&a.model)?;
    let inputs = load_inputs(&a.input_file, model.n_vars(), None)?;
    let solver = if a.via_sat { Some(parse_solver(&a.solver)?) } else { None };
    let mut correct = 0;
    let mut labelled = 0;
    for (i, x) in inputs.iter().enumerate() {
        let class = match &solver {
            Some(s) => classify_via_sat(&model, x, s)?,
            None => model.classify(&x.bits)?,
        };
        let margin = model.vote_margin(&x.bits)?;
        match x.label {
            Some(y) => {
                labelled += 1;
                correct += (y == class) as usize;
                println!("{} class={class} margin={margin} label={y}", i + 1);
            }
            None => println!("{} class={class} margin={margin}", i + 1),
        }
    }
    if labelled > 0 {
        println!("accuracy: {:.2}% ({correct}/{labelled})", 100.0 * correct as f64 / labelled as f64);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_encode(a: EncodeArgs) -> Result<ExitCode> {
    let model = load(&a.model)?;
    let mut pool = VarPool::new();
    let enc = encode_tsm(&model, &mut pool, "m");
    let formula = match a.assert_output {
        Some(c) => {
            let o = Formula::Var(enc.output_var);
            Formula::and([enc.formula, if c == 1 { o } else { Formula::not(o) }])
        }
        None => enc.formula,
    };
    let cnf = assert_cnf(&formula, &mut pool);
    std::fs::write(&a.out, write_dimacs(&cnf)).with_context(|| format!("writing {}", a.out.display()))?;
    let varmap = a
        .varmap
        .unwrap_or_else(|| a.out.parent().unwrap_or(Path::new(".")).join("varmap.txt"));
    let mut entries: Vec<(u32, &str)> = pool.entries().map(|(tag, v)| (v.0, tag)).collect();
    entries.sort_unstable();
    let mut text = String::new();
    for (id, tag) in entries {
        writeln!(text, "{tag} {id}").unwrap();
    }
    std::fs::write(&varmap, text).with_context(|| format!("writing {}", varmap.display()))?;
    println!(
        "{} variables, {} clauses -> {} (map: {})",
        cnf.var_count,
        cnf.clauses.len(),
        a.out.display(),
        varmap.display()
    );
    Ok(ExitCode::SUCCESS)
}

/// Collects the report text, printing it and optionally saving it.
struct Report {
    text: String,
    timing: bool,
}

impl Report {
    fn new(opts: &VerifyOpts) -> Self {
        Self {
            text: String::new(),
            timing: !opts.deterministic,
        }
    }

    fn records(&mut self, verdicts: &[Verdict], eta: Option<f64>) {
        for v in verdicts {
            writeln!(self.text, "{}", v.record(eta, self.timing).to_json()).unwrap();
        }
    }

    fn universal(&mut self, what: &str, eps: usize, u: &UniversalVerdict) {
        writeln!(
            self.text,
            "universal {what} eps={eps} eta={}: {} of {} hold, {} timed out, need {} -> {}",
            u.eta,
            u.robust_count,
            u.verdicts.len(),
            u.timeouts,
            u.threshold,
            u.result
        )
        .unwrap();
    }

    fn finish(self, opts: &VerifyOpts) -> Result<()> {
        print!("{}", self.text);
        if let Some(path) = &opts.report {
            std::fs::write(path, &self.text).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

fn worst(verdicts: &[Verdict]) -> Status {
    verdicts.iter().map(|v| Status::of(v.result)).max().unwrap_or(Status::Holds)
}

fn timeout_label(opts: &VerifyOpts) -> Option<f64> {
    (opts.timeout > 0.0).then_some(opts.timeout)
}

fn cmd_verify_robust(a: RobustArgs, eta: Option<f64>) -> Result<ExitCode> {
    let model = load(&a.model)?;
    let inputs = load_inputs(&a.instances.input_file, model.n_vars(), a.instances.limit)?;
    let solver = parse_solver(&a.opts.solver)?;
    let budget = budget(a.opts.timeout)?;
    let mut report = Report::new(&a.opts);
    let mut rows = Vec::new();
    let mut status = Status::Holds;
    let mut universal = Vec::new();
    for &eps in &a.instances.eps {
        let verdicts = match eta {
            Some(eta) => {
                let u = check_universal_robust(&model, &inputs, eps, eta, &solver, &budget, a.opts.jobs)?;
                status = status.max(Status::of_universal(u.result));
                report.records(&u.verdicts, Some(eta));
                let v = u.verdicts.clone();
                universal.push((eps, u));
                v
            }
            None => {
                let v = parallel_map(&inputs, a.opts.jobs, |x| check_robust(&model, x, eps, &solver, &budget))
                    .into_iter()
                    .collect::<tsmv_core::Result<Vec<_>>>()?;
                status = status.max(worst(&v));
                report.records(&v, None);
                v
            }
        };
        rows.push(SummaryRow::from_verdicts(eps, &verdicts));
    }
    let timing = report.timing;
    report
        .text
        .push_str(&format_summary(inputs.len(), "robust", &rows, timing, timeout_label(&a.opts)));
    for (eps, u) in &universal {
        report.universal("robustness", *eps, u);
    }
    report.finish(&a.opts)?;
    Ok(status.exit_code())
}

fn cmd_verify_equiv(a: EquivArgs) -> Result<ExitCode> {
    let m1 = load(&a.model_a)?;
    let m2 = load(&a.model_b)?;
    let solver = parse_solver(&a.opts.solver)?;
    let v = check_equivalence(&m1, &m2, &solver, &budget(a.opts.timeout)?)?;
    let mut report = Report::new(&a.opts);
    report.records(std::slice::from_ref(&v), None);
    writeln!(report.text, "{}", v.to_text(report.timing)).unwrap();
    report.finish(&a.opts)?;
    Ok(Status::of(v.result).exit_code())
}

fn cmd_verify_sim(a: SimArgs, eta: Option<f64>) -> Result<ExitCode> {
    let m1 = load(&a.model_a)?;
    let m2 = load(&a.model_b)?;
    if m1.n_vars() != m2.n_vars() {
        bail!("models take {} and {} inputs", m1.n_vars(), m2.n_vars());
    }
    let inputs = load_inputs(&a.instances.input_file, m1.n_vars(), a.instances.limit)?;
    let solver = parse_solver(&a.opts.solver)?;
    let budget = budget(a.opts.timeout)?;
    let mut report = Report::new(&a.opts);
    let mut rows = Vec::new();
    let mut status = Status::Holds;
    let mut universal = Vec::new();
    for &eps in &a.instances.eps {
        let verdicts = match eta {
            Some(eta) => {
                let u = check_universal_similar(&m1, &m2, &inputs, eps, eta, &solver, &budget, a.opts.jobs)?;
                status = status.max(Status::of_universal(u.result));
                report.records(&u.verdicts, Some(eta));
                let v = u.verdicts.clone();
                universal.push((eps, u));
                v
            }
            None => {
                let v = parallel_map(&inputs, a.opts.jobs, |x| check_similar(&m1, &m2, x, eps, &solver, &budget))
                    .into_iter()
                    .collect::<tsmv_core::Result<Vec<_>>>()?;
                status = status.max(worst(&v));
                report.records(&v, None);
                v
            }
        };
        rows.push(SummaryRow::from_verdicts(eps, &verdicts));
    }
    let timing = report.timing;
    report
        .text
        .push_str(&format_summary(inputs.len(), "similar", &rows, timing, timeout_label(&a.opts)));
    for (eps, u) in &universal {
        report.universal("similarity", *eps, u);
    }
    report.finish(&a.opts)?;
    Ok(status.exit_code())
}

fn cmd_solve(a: SolveArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let cnf = parse_dimacs(&text).with_context(|| format!("parsing {}", a.file.display()))?;
    let solver = parse_solver(if a.vsids { "embedded:vsids" } else { "embedded" })?;
    let result = solver.solve(&cnf, &budget(a.timeout)?)?;
    let (out, code) = match result.outcome {
        Outcome::Sat(m) => (SolverOutput::Sat(m), 10),
        Outcome::Unsat => (SolverOutput::Unsat, 20),
        Outcome::Timeout => (SolverOutput::Unknown, 0),
    };
    print!("{}", format_solver_output(&out, cnf.var_count));
    Ok(ExitCode::from(code))
}
