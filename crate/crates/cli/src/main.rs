//! `switchvi`: generate benchmark problems, run and compare solvers, and audit
//! descent certificates.
//!
//! Exit codes: 0 converged (or certificate passed), 1 error, 2 evaluation
//! budget exhausted, 3 certificate violation.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{RunConfig, Settings};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "switchvi", version, about = "Golden-ratio switching methods for monotone variational inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem with one method and write its trace CSV.
    Run(Flags),
    /// Solve one problem with several methods; writes per-method CSVs, merged.csv and meta.json.
    Compare(Flags),
    /// Solve while auditing the descent inequality; writes a JSON report.
    Certify(Flags),
    /// Write a problem snapshot as JSON.
    Gen(Flags),
}

/// Every flag maps to the config key of the same name.
#[derive(Debug, Args)]
struct Flags {
    /// Flat `key = value` file read before environment and flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// affine, zerosum, logistic, nash, mdp or rank2.
    #[arg(long)]
    problem: Option<String>,
    /// Load the problem from a `gen` snapshot instead of generating it.
    #[arg(long)]
    snapshot: Option<PathBuf>,
    /// Dimension; number of states for mdp, columns for zerosum.
    #[arg(long)]
    n: Option<usize>,
    /// Rows for zerosum, samples for logistic.
    #[arg(long)]
    m: Option<usize>,
    /// Nash-Cournot scenario: i or ii.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    actions: Option<usize>,
    #[arg(long)]
    branching: Option<usize>,
    /// MDP discount factor.
    #[arg(long)]
    discount: Option<f64>,
    #[arg(long)]
    method: Option<String>,
    /// Comma-separated list for compare.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_evals: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    phi_bar: Option<f64>,
    #[arg(long)]
    agraal_phi: Option<f64>,
    #[arg(long)]
    lambda0: Option<f64>,
    #[arg(long)]
    lambda_bar: Option<f64>,
    /// Step of the fixed-step baselines, replacing the Lipschitz rule.
    #[arg(long)]
    fixed_step: Option<f64>,
    /// literal or prose.
    #[arg(long)]
    alg1_rule: Option<String>,
    /// adaptive or force_momentum.
    #[arg(long)]
    alg2_policy: Option<String>,
    /// Record elapsed time per row; off keeps traces reproducible.
    #[arg(long)]
    wall_clock: Option<bool>,
    /// File (run, certify, gen) or directory (compare).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Number of certificate probe points.
    #[arg(long)]
    probes: Option<usize>,
    /// Per-step certificate tolerance.
    #[arg(long)]
    cert_tol: Option<f64>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        fn s<T: ToString>(v: &Option<T>) -> Option<String> {
            v.as_ref().map(ToString::to_string)
        }
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        vec![
            ("problem", self.problem.clone()),
            ("snapshot", path(&self.snapshot)),
            ("n", s(&self.n)),
            ("m", s(&self.m)),
            ("scenario", self.scenario.clone()),
            ("actions", s(&self.actions)),
            ("branching", s(&self.branching)),
            ("discount", s(&self.discount)),
            ("method", self.method.clone()),
            ("methods", self.methods.clone()),
            ("seed", s(&self.seed)),
            ("max_evals", s(&self.max_evals)),
            ("tol", s(&self.tol)),
            ("phi", s(&self.phi)),
            ("alpha", s(&self.alpha)),
            ("phi_bar", s(&self.phi_bar)),
            ("agraal_phi", s(&self.agraal_phi)),
            ("lambda0", s(&self.lambda0)),
            ("lambda_bar", s(&self.lambda_bar)),
            ("fixed_step", s(&self.fixed_step)),
            ("alg1_rule", self.alg1_rule.clone()),
            ("alg2_policy", self.alg2_policy.clone()),
            ("wall_clock", s(&self.wall_clock)),
            ("output", path(&self.output)),
            ("probes", s(&self.probes)),
            ("cert_tol", s(&self.cert_tol)),
        ]
    }

    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut settings = Settings::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            settings.apply_file(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        }
        settings.apply_env(std::env::vars())?;
        for (key, value) in self.pairs() {
            if let Some(v) = value {
                settings.set(key, v)?;
            }
        }
        RunConfig::from_settings(&settings)
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Run(f) => commands::run(&f.resolve()?),
        Command::Compare(f) => commands::compare(&f.resolve()?),
        Command::Certify(f) => commands::certify(&f.resolve()?),
        Command::Gen(f) => commands::gen(&f.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit with 2, which is reserved for budget exhaustion
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(outcome) => ExitCode::from(outcome as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Outcome::Error as u8)
        }
    }
}
