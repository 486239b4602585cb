use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use switchvi::analysis::{default_radius, probe_set, CertificateMonitor, CertificateReport};
use switchvi::trace::{write_merged_csv, write_trace_csv};
use switchvi::{solve, solve_observed, Method, RunRecord, Status, VIProblem};

use crate::config::RunConfig;
use crate::error::CliError;

/// Process outcome; the discriminant is the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged = 0,
    Error = 1,
    BudgetExhausted = 2,
    CertificateViolation = 3,
}

impl From<Status> for Outcome {
    fn from(s: Status) -> Self {
        match s {
            Status::Converged => Outcome::Converged,
            Status::BudgetExhausted => Outcome::BudgetExhausted,
        }
    }
}

/// SHA-256 of the problem's JSON snapshot.
pub fn problem_hash(problem: &VIProblem) -> Result<String, CliError> {
    let bytes = serde_json::to_vec(&problem.snapshot()?)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn write_trace(path: &Path, run: &RunRecord) -> Result<(), CliError> {
    let mut w = create(path)?;
    write_trace_csv(&mut w, &run.rows)?;
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

fn summary(problem: &VIProblem, run: &RunRecord) -> String {
    let residual = run.final_residual().map_or("-".to_string(), |r| format!("{r:.3e}"));
    let status = match run.status {
        Status::Converged => "converged",
        Status::BudgetExhausted => "budget exhausted",
    };
    format!(
        "{} on {}: {status} after {} operator evals, residual {residual}",
        run.method, problem.name, run.counter.operator_evals
    )
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let problem = cfg.problem.build(cfg.solve.seed)?;
    let out = cfg.output.clone().unwrap_or_else(|| PathBuf::from("trace.csv"));
    // fail on an unwritable path before spending the budget
    drop(create(&out)?);
    let record = solve(&problem, cfg.method, &cfg.solve)?;
    write_trace(&out, &record)?;
    eprintln!("{}", summary(&problem, &record));
    Ok(record.status.into())
}

#[derive(Debug, Serialize)]
struct MethodMeta {
    method: String,
    trace: Option<String>,
    status: Option<Status>,
    operator_evals: Option<u64>,
    final_residual: Option<f64>,
    rollbacks: Option<u64>,
    error: Option<String>,
    problem_hash: String,
}

#[derive(Debug, Serialize)]
struct CompareMeta {
    problem: String,
    seed: u64,
    problem_hash: String,
    tol: f64,
    max_operator_evals: u64,
    merged: String,
    methods: Vec<MethodMeta>,
}

/// Runs every method on one problem instance, one thread per method.
pub fn compare(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.methods.len() < 2 {
        return Err(CliError::Config("compare needs at least two methods".into()));
    }
    let problem = cfg.problem.build(cfg.solve.seed)?;
    let hash = problem_hash(&problem)?;
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("compare-out"));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;

    let results: Vec<(Method, Result<RunRecord, CliError>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .methods
            .iter()
            .map(|&method| {
                let (problem, dir) = (&problem, &dir);
                scope.spawn(move || {
                    let run = solve(problem, method, &cfg.solve).map_err(CliError::from).and_then(|run| {
                        write_trace(&dir.join(format!("{method}.csv")), &run)?;
                        Ok(run)
                    });
                    (method, run)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });

    let mut outcome = Outcome::Converged;
    let mut traces = Vec::new();
    let mut metas = Vec::new();
    for (method, result) in results {
        let mut meta = MethodMeta {
            method: method.to_string(),
            trace: None,
            status: None,
            operator_evals: None,
            final_residual: None,
            rollbacks: None,
            error: None,
            problem_hash: hash.clone(),
        };
        match result {
            Ok(run) => {
                eprintln!("{}", summary(&problem, &run));
                if run.status == Status::BudgetExhausted && outcome == Outcome::Converged {
                    outcome = Outcome::BudgetExhausted;
                }
                meta.trace = Some(format!("{method}.csv"));
                meta.status = Some(run.status);
                meta.operator_evals = Some(run.counter.operator_evals);
                meta.final_residual = run.final_residual();
                meta.rollbacks = Some(run.rollbacks);
                traces.push((method.to_string(), run.rows));
            }
            Err(e) => {
                eprintln!("{method} on {}: error: {e}", problem.name);
                outcome = Outcome::Error;
                meta.error = Some(e.to_string());
            }
        }
        metas.push(meta);
    }

    let merged = dir.join("merged.csv");
    let mut w = create(&merged)?;
    write_merged_csv(&mut w, &traces)?;
    w.flush().map_err(|e| CliError::io(&merged, e))?;
    let meta = CompareMeta {
        problem: problem.name.clone(),
        seed: cfg.solve.seed,
        problem_hash: hash,
        tol: cfg.solve.tol,
        max_operator_evals: cfg.solve.max_operator_evals,
        merged: "merged.csv".into(),
        methods: metas,
    };
    write_json(&dir.join("meta.json"), &meta)?;
    Ok(outcome)
}

#[derive(Debug, Serialize)]
struct CertifyOutput {
    problem_hash: String,
    status: Status,
    operator_evals: u64,
    final_residual: Option<f64>,
    certificate: CertificateReport,
}

/// Solves while checking the descent inequality at seeded probe points.
pub fn certify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if !matches!(cfg.method, Method::Alg1 | Method::Alg2) {
        return Err(CliError::Config(format!("certify supports alg1 and alg2, got {}", cfg.method)));
    }
    let problem = cfg.problem.build(cfg.solve.seed)?;
    let out = cfg.output.clone().unwrap_or_else(|| PathBuf::from("certificate.json"));
    drop(create(&out)?);
    let probes = probe_set(&problem, cfg.probes, default_radius(&problem), cfg.solve.seed)?;
    let mut monitor = CertificateMonitor::new(&problem, probes, cfg.cert_tol);
    let run = solve_observed(&problem, cfg.method, &cfg.solve, &mut monitor)?;
    let report = monitor.report(cfg.method.name())?;
    eprintln!("{}", summary(&problem, &run));
    eprintln!(
        "certificate: {} steps, {} violations, min scaled slack {:.3e}{}",
        report.windows,
        report.violations,
        report.min_scaled_slack,
        if problem.monotone { "" } else { " (operator not monotone)" }
    );
    let passed = report.passed;
    let doc = CertifyOutput {
        problem_hash: problem_hash(&problem)?,
        status: run.status,
        operator_evals: run.counter.operator_evals,
        final_residual: run.final_residual(),
        certificate: report,
    };
    write_json(&out, &doc)?;
    Ok(if passed { Outcome::Converged } else { Outcome::CertificateViolation })
}

/// Writes the problem snapshot as JSON; `-` or no output means stdout.
pub fn gen(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let problem = cfg.problem.build(cfg.solve.seed)?;
    let snap = problem.snapshot()?;
    match cfg.output.as_deref().filter(|p| *p != Path::new("-")) {
        Some(path) => write_json(path, &snap)?,
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            serde_json::to_writer_pretty(&mut w, &snap)?;
            writeln!(w).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
        }
    }
    eprintln!("{} [sha256 {}]", problem.name, problem_hash(&problem)?);
    Ok(Outcome::Converged)
}
