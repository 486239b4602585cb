//! Layered run configuration.
//!
//! Settings are flat `key = value` pairs. Later layers win: a config file,
//! then `SWITCHVI_<KEY>` environment variables, then command-line flags.
//! Keys accept `-` or `_` as separator.

use std::collections::BTreeMap;
use std::path::PathBuf;

use switchvi::problems::{
    garnet_mdp, nash_cournot_scenario, nonmonotone_rank2, sparse_logistic, strongly_monotone_affine, zero_sum_game,
    NashScenario,
};
use switchvi::solvers::{Alg1Rule, SwitchPolicy};
use switchvi::{Method, MethodParams, ProblemSnapshot, SolveConfig, VIProblem};

use crate::error::CliError;

pub const ENV_PREFIX: &str = "SWITCHVI_";

pub const KEYS: &[&str] = &[
    "problem",
    "snapshot",
    "n",
    "m",
    "scenario",
    "actions",
    "branching",
    "discount",
    "method",
    "methods",
    "seed",
    "max_evals",
    "tol",
    "phi",
    "alpha",
    "phi_bar",
    "agraal_phi",
    "lambda0",
    "lambda_bar",
    "fixed_step",
    "alg1_rule",
    "alg2_policy",
    "wall_clock",
    "output",
    "probes",
    "cert_tol",
];

fn normalize_key(raw: &str) -> Result<String, CliError> {
    let key = raw.trim().to_ascii_lowercase().replace('-', "_");
    if KEYS.contains(&key.as_str()) {
        Ok(key)
    } else {
        Err(CliError::Config(format!("unknown setting '{raw}'; valid settings: {}", KEYS.join(", "))))
    }
}

/// Merged `key → value` settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), CliError> {
        self.0.insert(normalize_key(key)?, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got '{line}'", no + 1)))?;
            self.set(k, v.trim()).map_err(|e| CliError::Config(format!("line {}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn apply_env(&mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<(), CliError> {
        for (name, value) in vars {
            if let Some(key) = name.strip_prefix(ENV_PREFIX) {
                self.set(key, value).map_err(|e| CliError::Config(format!("{name}: {e}")))?;
            }
        }
        Ok(())
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key).map(|v| v.parse::<T>().map_err(|e| CliError::Config(format!("{key} = '{v}': {e}")))).transpose()
    }

    fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.parse(key)?.unwrap_or(default))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Affine {
        n: usize,
    },
    ZeroSum {
        m: usize,
        n: usize,
    },
    Logistic {
        n: usize,
        m: usize,
    },
    Nash {
        n: usize,
        scenario: NashScenario,
    },
    Mdp {
        states: usize,
        actions: usize,
        branching: usize,
        discount: f64,
    },
    Rank2 {
        n: usize,
    },
    /// A snapshot written by `gen`.
    Snapshot(PathBuf),
}

pub const FAMILIES: [&str; 6] = ["affine", "zerosum", "logistic", "nash", "mdp", "rank2"];

impl ProblemSpec {
    pub fn build(&self, seed: u64) -> Result<VIProblem, CliError> {
        let p = match *self {
            ProblemSpec::Affine { n } => strongly_monotone_affine(n, seed)?,
            ProblemSpec::ZeroSum { m, n } => zero_sum_game(m, n, seed)?,
            ProblemSpec::Logistic { n, m } => sparse_logistic(n, m, seed)?,
            ProblemSpec::Nash { n, scenario } => nash_cournot_scenario(n, scenario, seed)?,
            ProblemSpec::Mdp { states, actions, branching, discount } => {
                garnet_mdp(states, actions, branching, discount, seed)?
            }
            ProblemSpec::Rank2 { n } => nonmonotone_rank2(n, seed)?,
            ProblemSpec::Snapshot(ref path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let snap: ProblemSnapshot = serde_json::from_str(&text)?;
                VIProblem::from_snapshot(snap)?
            }
        };
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub method: Method,
    pub methods: Vec<Method>,
    pub solve: SolveConfig,
    pub output: Option<PathBuf>,
    pub probes: usize,
    pub cert_tol: f64,
}

fn parse_method(s: &str) -> Result<Method, CliError> {
    Ok(s.trim().parse::<Method>()?)
}

fn parse_rule(s: &str) -> Result<Alg1Rule, CliError> {
    match s {
        "literal" => Ok(Alg1Rule::Literal),
        "prose" => Ok(Alg1Rule::Prose),
        other => Err(CliError::Config(format!("alg1_rule must be literal or prose, got '{other}'"))),
    }
}

fn parse_policy(s: &str) -> Result<SwitchPolicy, CliError> {
    match s {
        "adaptive" => Ok(SwitchPolicy::Adaptive),
        "force_momentum" | "force-momentum" => Ok(SwitchPolicy::ForceMomentum),
        other => Err(CliError::Config(format!("alg2_policy must be adaptive or force_momentum, got '{other}'"))),
    }
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let problem = match (s.get("snapshot"), s.get("problem")) {
            (Some(path), _) => ProblemSpec::Snapshot(PathBuf::from(path)),
            (None, family) => match family.unwrap_or("affine") {
                "affine" => ProblemSpec::Affine { n: s.parse_or("n", 100)? },
                "zerosum" => ProblemSpec::ZeroSum { m: s.parse_or("m", 50)?, n: s.parse_or("n", 50)? },
                "logistic" => ProblemSpec::Logistic { n: s.parse_or("n", 500)?, m: s.parse_or("m", 200)? },
                "nash" => {
                    ProblemSpec::Nash { n: s.parse_or("n", 1000)?, scenario: s.get("scenario").unwrap_or("i").parse()? }
                }
                "mdp" => ProblemSpec::Mdp {
                    states: s.parse_or("n", 50)?,
                    actions: s.parse_or("actions", 5)?,
                    branching: s.parse_or("branching", 5)?,
                    discount: s.parse_or("discount", 0.9)?,
                },
                "rank2" => ProblemSpec::Rank2 { n: s.parse_or("n", 500)? },
                other => {
                    return Err(CliError::Config(format!(
                        "unknown problem '{other}'; valid problems: {}",
                        FAMILIES.join(", ")
                    )))
                }
            },
        };

        let method = parse_method(s.get("method").unwrap_or("alg2"))?;
        let methods = match s.get("methods") {
            Some(list) => {
                list.split(',').filter(|m| !m.trim().is_empty()).map(parse_method).collect::<Result<_, _>>()?
            }
            None => Method::ALL.to_vec(),
        };

        let d = MethodParams::default();
        let params = MethodParams {
            phi: s.parse_or("phi", d.phi)?,
            alpha: s.parse_or("alpha", d.alpha)?,
            phi_bar: s.parse_or("phi_bar", d.phi_bar)?,
            agraal_phi: s.parse_or("agraal_phi", d.agraal_phi)?,
            lambda0: s.parse_or("lambda0", d.lambda0)?,
            lambda_bar: s.parse_or("lambda_bar", d.lambda_bar)?,
            alg1_rule: s.get("alg1_rule").map(parse_rule).transpose()?.unwrap_or(d.alg1_rule),
            alg2_policy: s.get("alg2_policy").map(parse_policy).transpose()?.unwrap_or(d.alg2_policy),
            fixed_step: s.parse("fixed_step")?,
        };
        let tol: f64 = s.parse_or("tol", 1e-6)?;
        if !(tol > 0.0) {
            return Err(CliError::Config(format!("tol must be positive, got {tol}")));
        }
        let solve = SolveConfig {
            max_operator_evals: s.parse_or("max_evals", 20_000)?,
            tol,
            seed: s.parse_or("seed", 0)?,
            params,
            wall_clock: s.parse_or("wall_clock", false)?,
        };
        let cert_tol: f64 = s.parse_or("cert_tol", 1e-7)?;
        if !(cert_tol >= 0.0) {
            return Err(CliError::Config(format!("cert_tol must be nonnegative, got {cert_tol}")));
        }
        Ok(Self {
            problem,
            method,
            methods,
            solve,
            output: s.get("output").map(PathBuf::from),
            probes: s.parse_or("probes", 20)?,
            cert_tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_env_and_flags_layer_in_order() {
        let mut s = Settings::default();
        s.apply_file("# comment\nmethod = eg\nseed=4\n\nmax-evals = 10 # trailing\n").unwrap();
        s.apply_env([("SWITCHVI_SEED".into(), "5".into()), ("HOME".into(), "/root".into())]).unwrap();
        s.set("max_evals", "99").unwrap();
        let c = RunConfig::from_settings(&s).unwrap();
        assert_eq!(c.method, Method::Eg);
        assert_eq!(c.solve.seed, 5);
        assert_eq!(c.solve.max_operator_evals, 99);
    }

    #[test]
    fn defaults_follow_the_benchmark_sizes() {
        let c = RunConfig::from_settings(&Settings::default()).unwrap();
        assert_eq!(c.problem, ProblemSpec::Affine { n: 100 });
        assert_eq!(c.method, Method::Alg2);
        assert_eq!(c.solve.params, MethodParams::default());
        assert_eq!(c.methods.len(), 7);
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        let mut s = Settings::default();
        assert!(s.apply_file("colour = red").is_err());
        assert!(s.apply_file("just words").is_err());
        assert!(s.apply_env([("SWITCHVI_BOGUS".into(), "1".into())]).is_err());
        s.set("tol", "0").unwrap();
        assert!(RunConfig::from_settings(&s).is_err());
        let mut s = Settings::default();
        s.set("method", "newton").unwrap();
        let msg = RunConfig::from_settings(&s).unwrap_err().to_string();
        assert!(msg.contains("alg1") && msg.contains("prjref"), "{msg}");
    }

    #[test]
    fn mdp_reads_states_from_n() {
        let mut s = Settings::default();
        s.apply_file("problem = mdp\nn = 7\ndiscount = 0.99").unwrap();
        let c = RunConfig::from_settings(&s).unwrap();
        assert_eq!(c.problem, ProblemSpec::Mdp { states: 7, actions: 5, branching: 5, discount: 0.99 });
    }
}
