//! Job configuration, command dispatch, and report emission.
//!
//! A job is a [`JobConfig`] read from a JSON file and/or flags (flags win).
//! It is normalized before any computation, so the config embedded in a
//! report reruns to a byte-identical report.

mod commands;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{BoundsError, Variant};
use crate::exact::{format_rational, parse_rational, ExactError, IntPolynomial, Rational};
use crate::groupgen::GroupGenError;
use crate::hyp::HypError;
use crate::quat::{AlgebraConfig, QuatError, ScalarSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_BAD_INPUT: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bound,
    Window,
    Mahler,
    Salem,
    Hilbert,
    Enumerate,
    TraceCensus,
    Generators,
    SafetyConstant,
}

impl Command {
    fn tabular(self) -> bool {
        matches!(
            self,
            Command::Bound | Command::Window | Command::Enumerate | Command::TraceCensus | Command::Generators
        )
    }

    /// Config keys the command reads, besides `command` and `timings`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Bound => &["d", "d_to", "vol", "vol_note", "lambda", "lambda_preset", "variant", "C", "c", "m_S"],
            Command::Window => &["d", "d_to"],
            Command::Mahler => &["poly", "trace", "algebra"],
            Command::Salem => &["poly"],
            Command::Hilbert => &["algebra"],
            Command::Enumerate => &["algebra", "projective", "budget", "precision_cap", "cap"],
            Command::TraceCensus => &["algebra", "projective", "budget", "precision_cap", "cap", "d"],
            Command::Generators => &[
                "algebra",
                "projective",
                "budget",
                "precision_cap",
                "gen_cap",
                "target_cap",
                "max_word_length",
                "node_cap",
                "greedy",
            ],
            Command::SafetyConstant => &["d_max"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaPreset {
    /// `λ = 975/4096`.
    Congruence,
}

/// A rational given as a JSON integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn parse(&self, key: &str) -> Result<Rational, CliError> {
        match self {
            Num::Int(n) => Ok(Rational::from_integer((*n).into())),
            Num::Str(s) => parse_rational(s).map_err(|_| CliError::BadInput(format!("{key}: cannot parse {s:?}"))),
        }
    }

    fn canonical(&self, key: &str) -> Result<Num, CliError> {
        Ok(Num::Str(format_rational(&self.parse(key)?)))
    }
}

impl From<&str> for Num {
    fn from(s: &str) -> Self {
        Num::Str(s.to_string())
    }
}

/// Every setting of a job. Output paths, worker count and the config file
/// itself are not part of the reproducible config and are never embedded.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraConfig>,
    /// Shorthand for an algebra over ℚ; overrides `algebra.a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    /// Sweep `d..=d_to`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_to: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vol: Option<Num>,
    /// Free-text provenance of `vol`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vol_note: Option<String>,
    /// First eigenvalue `λ₁`; clamped to `min{1/4, λ₁}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_preset: Option<LambdaPreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, rename = "C", skip_serializing_if = "Option::is_none")]
    pub leading: Option<Num>,
    #[serde(default, rename = "c", skip_serializing_if = "Option::is_none")]
    pub safety: Option<Num>,
    #[serde(default, rename = "m_S", skip_serializing_if = "Option::is_none")]
    pub m_s: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<IntPolynomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<ScalarSpec>,
    /// Norm cap `N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_cap: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_cap: Option<Num>,
    /// Word-length budget `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_word_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub greedy: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projective: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_cap: Option<u32>,
    /// Record wall-clock timings (reports are then not byte-reproducible).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<bool>,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => EXIT_BAD_INPUT,
            CliError::Inconclusive(_) => EXIT_INCONCLUSIVE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn exact_error(e: ExactError) -> CliError {
    match e {
        ExactError::PrecisionCap(_) | ExactError::AmbiguousEnclosure(_) => CliError::Inconclusive(e.to_string()),
        _ => CliError::BadInput(e.to_string()),
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        exact_error(e)
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Uncertified { .. } => CliError::Inconclusive(e.to_string()),
            BoundsError::Exact(x) => exact_error(x),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<QuatError> for CliError {
    fn from(e: QuatError) -> Self {
        match e {
            QuatError::Exact(x) => exact_error(x),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<GroupGenError> for CliError {
    fn from(e: GroupGenError) -> Self {
        match e {
            GroupGenError::BoxOverflow { .. } | GroupGenError::BoxUncertified(_) | GroupGenError::CoordinateOverflow => {
                CliError::Inconclusive(e.to_string())
            }
            GroupGenError::Hyp(HypError::Undecided(_)) => CliError::Inconclusive(e.to_string()),
            GroupGenError::VerificationFailed(_) => CliError::Internal(e.to_string()),
            GroupGenError::Exact(x) | GroupGenError::Hyp(HypError::Exact(x)) => exact_error(x),
            GroupGenError::Bounds(x) => x.into(),
            GroupGenError::Quat(x) => x.into(),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

/// Fixed top-level report schema.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: Value,
    pub results: Value,
    pub violations: Vec<Value>,
    pub timings: BTreeMap<String, f64>,
    pub versions: BTreeMap<String, String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug)]
pub struct JobOutcome {
    pub report: Report,
    pub csv: Option<String>,
    pub exit_code: i32,
}

fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("smallgens".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("report_schema".to_string(), "1".to_string()),
    ])
}

fn set_keys(cfg: &JobConfig) -> Vec<String> {
    match serde_json::to_value(cfg).expect("config serializes") {
        Value::Object(m) => m.keys().cloned().collect(),
        _ => vec![],
    }
}

fn canonical(n: &Option<Num>, key: &str) -> Result<Option<Num>, CliError> {
    n.as_ref().map(|v| v.canonical(key)).transpose()
}

impl JobConfig {
    /// Parses a config file body: a job config, or a report whose embedded
    /// config is reused.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::BadInput(format!("config: {e}")))?;
        let v = match v {
            Value::Object(mut m) if m.contains_key("config") && m.contains_key("versions") => {
                m.remove("config").expect("checked")
            }
            other => other,
        };
        serde_json::from_value(v).map_err(|e| CliError::BadInput(format!("config: {e}")))
    }

    /// Fields of `flags` that are set replace those of `self`.
    pub fn overlay(mut self, flags: JobConfig) -> JobConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if flags.$f.is_some() { self.$f = flags.$f; } )* };
        }
        take!(
            command, algebra, a, b, d, d_to, d_max, vol, vol_note, lambda, lambda_preset, variant, leading, safety,
            m_s, poly, trace, cap, gen_cap, target_cap, max_word_length, node_cap, greedy, projective, budget,
            precision_cap, timings, out, csv, workers
        );
        self
    }

    /// Validates the config and fills every default, so that the result is a
    /// complete, canonical description of the job.
    pub fn resolve(&self) -> Result<JobConfig, CliError> {
        let command = self
            .command
            .ok_or_else(|| CliError::BadInput("no command given".into()))?;
        let mut c = self.clone();
        // a/b shorthand folds into the algebra
        if c.a.is_some() || c.b.is_some() {
            let spec = |n: &Option<Num>, key: &str| -> Result<Option<ScalarSpec>, CliError> {
                n.as_ref()
                    .map(|v| Ok(ScalarSpec::Rational(format_rational(&v.parse(key)?))))
                    .transpose()
            };
            let (a, b) = (spec(&c.a, "a")?, spec(&c.b, "b")?);
            let alg = match (c.algebra.take(), a, b) {
                (Some(mut alg), a, b) => {
                    if let Some(a) = a {
                        alg.a = a;
                    }
                    if let Some(b) = b {
                        alg.b = b;
                    }
                    alg
                }
                (None, Some(a), Some(b)) => {
                    let mut alg = AlgebraConfig::over_q("1", "1");
                    alg.a = a;
                    alg.b = b;
                    alg
                }
                _ => return Err(CliError::BadInput("both a and b are needed".into())),
            };
            c.algebra = Some(alg);
            c.a = None;
            c.b = None;
        }
        let allowed = command.keys();
        for k in set_keys(&c) {
            if k != "command" && k != "timings" && !allowed.contains(&k.as_str()) {
                return Err(CliError::BadInput(format!("{k} does not apply to {}", command_name(command))));
            }
        }
        if c.csv.is_some() && !command.tabular() {
            return Err(CliError::BadInput(format!("{} has no CSV output", command_name(command))));
        }
        if c.workers == Some(0) {
            return Err(CliError::BadInput("workers must be positive".into()));
        }
        for (n, key) in [
            (&mut c.vol, "vol"),
            (&mut c.lambda, "lambda"),
            (&mut c.leading, "C"),
            (&mut c.safety, "c"),
            (&mut c.m_s, "m_S"),
            (&mut c.cap, "cap"),
            (&mut c.gen_cap, "gen_cap"),
            (&mut c.target_cap, "target_cap"),
        ] {
            *n = canonical(n, key)?;
        }
        commands::defaults(command, &mut c)?;
        if c.timings == Some(false) {
            c.timings = None;
        }
        Ok(c)
    }
}

pub fn command_name(c: Command) -> String {
    c.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn wants_timings(cfg: &JobConfig) -> bool {
    cfg.timings == Some(true)
}

/// Runs a job: resolves the config, executes the command, and assembles the
/// report and exit code. Never panics on bad input.
pub fn run_job(cfg: &JobConfig) -> JobOutcome {
    let resolved = match cfg.resolve() {
        Ok(c) => c,
        Err(e) => return error_outcome(serde_json::to_value(cfg).unwrap_or(Value::Null), &e),
    };
    let config = serde_json::to_value(&resolved).expect("config serializes");
    let run = || commands::execute(&resolved);
    let result = match resolved.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(CliError::Internal(e.to_string())),
        },
        None => run(),
    };
    match result {
        Ok(out) => {
            let exit_code = if !out.violations.is_empty() {
                EXIT_VIOLATION
            } else if !out.inconclusive.is_empty() {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            };
            let status = match exit_code {
                EXIT_VIOLATION => "violation",
                EXIT_INCONCLUSIVE => "inconclusive",
                _ => "ok",
            };
            let mut results = json!({ "status": status });
            if !out.inconclusive.is_empty() {
                results["inconclusive"] = json!(out.inconclusive);
            }
            if let (Value::Object(r), Value::Object(o)) = (&mut results, out.results) {
                r.extend(o);
            }
            JobOutcome {
                report: Report {
                    config,
                    results,
                    violations: out.violations,
                    timings: if wants_timings(&resolved) { out.timings } else { BTreeMap::new() },
                    versions: versions(),
                },
                csv: out.csv,
                exit_code,
            }
        }
        Err(e) => error_outcome(config, &e),
    }
}

fn error_outcome(config: Value, e: &CliError) -> JobOutcome {
    JobOutcome {
        report: Report {
            config,
            results: json!({ "status": "error", "error": e.to_string() }),
            violations: vec![],
            timings: BTreeMap::new(),
            versions: versions(),
        },
        csv: None,
        exit_code: e.exit_code(),
    }
}

/// Writes `data` to a temporary file beside `path`, then renames it over `path`.
pub fn write_atomic(path: &Path, data: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(data.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Parser, Debug, Default)]
#[command(
    name = "smallgens",
    version,
    about = "Generator-norm bounds for arithmetic Fuchsian groups, with exact unit enumeration and generation certificates",
    after_help = "Exit codes: 0 ok, 2 violation found, 3 inconclusive, 4 bad input."
)]
pub struct Cli {
    /// Command to run (may instead come from the config file).
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON job config, or a previous report to rerun.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Algebra parameter a over ℚ.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Algebra parameter b over ℚ.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Trace-field degree.
    #[arg(long)]
    pub d: Option<u64>,
    /// Last degree of a sweep starting at --d.
    #[arg(long)]
    pub d_to: Option<u64>,
    /// Largest degree for the safety constant.
    #[arg(long)]
    pub d_max: Option<u64>,
    /// Covolume (rational).
    #[arg(long)]
    pub vol: Option<String>,
    /// Where the covolume comes from.
    #[arg(long)]
    pub vol_note: Option<String>,
    /// First Laplace eigenvalue (rational), clamped to 1/4.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long, value_enum)]
    pub lambda_preset: Option<LambdaPreset>,
    /// Bound variant: general, congruence, torsion-free, salem.
    #[arg(long)]
    pub variant: Option<Variant>,
    /// Leading constant C.
    #[arg(long = "C")]
    pub leading: Option<String>,
    /// Safety constant c.
    #[arg(long = "c")]
    pub safety: Option<String>,
    /// Salem constant m_S.
    #[arg(long = "m-s")]
    pub m_s: Option<String>,
    /// Integer polynomial coefficients, constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Option<Vec<i64>>,
    /// Trace in the base field (rational, or comma-separated coordinates).
    #[arg(long, allow_hyphen_values = true)]
    pub trace: Option<String>,
    /// Norm cap N.
    #[arg(long)]
    pub cap: Option<String>,
    /// Norm cap of the generating ball.
    #[arg(long)]
    pub gen_cap: Option<String>,
    /// Norm cap of the target ball.
    #[arg(long)]
    pub target_cap: Option<String>,
    /// Word-length budget L.
    #[arg(long)]
    pub max_word_length: Option<usize>,
    /// Node cap per breadth-first search.
    #[arg(long)]
    pub node_cap: Option<usize>,
    /// Greedy reduction before search.
    #[arg(long)]
    pub greedy: Option<bool>,
    /// Identify ±x.
    #[arg(long)]
    pub projective: Option<bool>,
    /// Candidate budget of the coefficient box.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Precision cap in bits.
    #[arg(long)]
    pub precision_cap: Option<u32>,
    /// Record wall-clock timings.
    #[arg(long)]
    pub timings: bool,
    /// JSON report path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV output path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl Cli {
    pub fn flags(&self) -> JobConfig {
        let num = |s: &Option<String>| s.as_deref().map(Num::from);
        JobConfig {
            command: self.command,
            algebra: None,
            a: num(&self.a),
            b: num(&self.b),
            d: self.d,
            d_to: self.d_to,
            d_max: self.d_max,
            vol: num(&self.vol),
            vol_note: self.vol_note.clone(),
            lambda: num(&self.lambda),
            lambda_preset: self.lambda_preset,
            variant: self.variant,
            leading: num(&self.leading),
            safety: num(&self.safety),
            m_s: num(&self.m_s),
            poly: self.poly.as_ref().map(|c| IntPolynomial::from_i64(c)),
            trace: self.trace.as_ref().map(|t| {
                if t.contains(',') {
                    ScalarSpec::Coords(t.split(',').map(|s| ScalarSpec::Rational(s.trim().to_string())).collect())
                } else {
                    ScalarSpec::Rational(t.clone())
                }
            }),
            cap: num(&self.cap),
            gen_cap: num(&self.gen_cap),
            target_cap: num(&self.target_cap),
            max_word_length: self.max_word_length,
            node_cap: self.node_cap,
            greedy: self.greedy,
            projective: self.projective,
            budget: self.budget,
            precision_cap: self.precision_cap,
            timings: self.timings.then_some(true),
            out: self.out.clone(),
            csv: self.csv.clone(),
            workers: self.workers,
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let file = match &cli.config {
        Some(path) => match std::fs::read_to_string(path).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))
        {
            Ok(text) => JobConfig::from_json(&text),
            Err(e) => Err(e),
        },
        None => Ok(JobConfig::default()),
    };
    let cfg = match file {
        Ok(f) => f.overlay(cli.flags()),
        Err(e) => {
            eprintln!("smallgens: {e}");
            let out = error_outcome(Value::Null, &e);
            emit(&out, cli.out.as_deref(), None);
            return out.exit_code;
        }
    };
    let outcome = run_job(&cfg);
    if let Value::String(err) = &outcome.report.results["error"] {
        eprintln!("smallgens: {err}");
    }
    emit(&outcome, cfg.out.as_deref(), cfg.csv.as_deref())
}

fn emit(outcome: &JobOutcome, out: Option<&Path>, csv: Option<&Path>) -> i32 {
    let json = outcome.report.to_json();
    match out {
        Some(p) => {
            if let Err(e) = write_atomic(p, &json) {
                eprintln!("smallgens: cannot write {}: {e}", p.display());
                return EXIT_BAD_INPUT;
            }
        }
        None => print!("{json}"),
    }
    if let (Some(p), Some(text)) = (csv, &outcome.csv) {
        if let Err(e) = write_atomic(p, text) {
            eprintln!("smallgens: cannot write {}: {e}", p.display());
            return EXIT_BAD_INPUT;
        }
    }
    outcome.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str) -> JobConfig {
        JobConfig::from_json(text).unwrap()
    }

    fn args(line: &str) -> JobConfig {
        let cli = Cli::try_parse_from(std::iter::once("smallgens").chain(line.split_whitespace())).unwrap();
        cli.flags()
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            JobConfig::from_json(r#"{"command":"window","d":2,"zzz":1}"#),
            Err(CliError::BadInput(_))
        ));
        let out = run_job(&job(r#"{"command":"window","d":2,"cap":5}"#));
        assert_eq!(out.exit_code, EXIT_BAD_INPUT);
        assert_eq!(out.report.results["status"], "error");
    }

    #[test]
    fn flags_override_file() {
        let cfg = job(r#"{"command":"window","d":2}"#).overlay(args("--d 3"));
        assert_eq!(cfg.d, Some(3));
        assert_eq!(cfg.command, Some(Command::Window));
    }

    #[test]
    fn report_round_trips() {
        let first = run_job(&args("bound --variant congruence --d 1 --vol 1"));
        assert_eq!(first.exit_code, EXIT_OK);
        let text = first.report.to_json();
        let again = run_job(&JobConfig::from_json(&text).unwrap());
        assert_eq!(again.report.to_json(), text);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = parsed.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["config", "results", "timings", "versions", "violations"]);
    }

    #[test]
    fn congruence_exponents() {
        let out = run_job(&args("bound --variant congruence --d 1 --vol 1"));
        let r = &out.report.results["reports"][0];
        assert_eq!(r["base_exponent"]["value"]["exact"], "384/5");
        assert_eq!(r["vol_exponent"]["value"]["exact"], "192/25");
        assert_eq!(out.report.config["lambda_preset"], "congruence");
    }

    #[test]
    fn bare_lambda_is_clamped() {
        let out = run_job(&args("bound --d 2 --vol 1 --lambda 1/2"));
        let s = &out.report.results["reports"][0]["inputs"]["spectral"];
        assert_eq!(s["lambda"], "1/4");
        assert_eq!(s["lambda1"], "1/2");
        let out = run_job(&args("bound --d 2 --vol 1 --lambda 1/2 --lambda-preset congruence"));
        assert_eq!(out.exit_code, EXIT_BAD_INPUT);
        let out = run_job(&args("bound --d 2 --vol 1"));
        assert_eq!(out.exit_code, EXIT_BAD_INPUT);
    }

    #[test]
    fn window_example() {
        let out = run_job(&args("window --d 2"));
        let w = &out.report.results["windows"][0]["window"];
        assert_eq!(w["lower"]["decimal"], "1.414213562e0");
        assert_eq!(w["upper"]["decimal"], "2.000000668e0");
        assert!(out.csv.unwrap().starts_with("d,lower,upper"));
    }

    #[test]
    fn timings_are_opt_in() {
        assert!(run_job(&args("window --d 1")).report.timings.is_empty());
        let out = run_job(&args("window --d 1 --timings"));
        assert!(out.report.timings.contains_key("total"));
    }

    #[test]
    fn bad_inputs_exit_four() {
        for line in [
            "window",
            "window --d 0",
            "window --d 3 --d-to 2",
            "hilbert --a 0 --b 3",
            "enumerate --a 2 --b 3",
            "salem",
            "window --d 2 --workers 0",
            "safety-constant --csv x.csv",
        ] {
            assert_eq!(run_job(&args(line)).exit_code, EXIT_BAD_INPUT, "{line}");
        }
        assert!(Cli::try_parse_from(["smallgens", "window", "--bogus"]).unwrap_err().use_stderr());
    }

    #[test]
    fn hilbert_ramification() {
        let out = run_job(&args("hilbert --a -1 --b -1"));
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.report.results["product"], 1);
        assert_eq!(out.report.results["discriminant"], "2");
        assert_eq!(out.report.results["ramification"]["infinite_ramified"], true);
    }

    #[test]
    fn violations_exit_two() {
        let out = run_job(&job(
            r#"{"command":"trace-census","cap":6,"algebra":{"a":3,"b":-1,
                "order_basis":[[1,0,0,0],[0,1,0,0],[0,0,1,0],["1/2","1/2","1/2","1/2"]]}}"#,
        ));
        assert_eq!(out.exit_code, EXIT_VIOLATION);
        assert_eq!(out.report.results["status"], "violation");
        assert!(out.report.violations.iter().all(|v| v["check"] == "stated_window"));
    }

    #[test]
    fn node_cap_exits_three() {
        let out = run_job(&args("generators --a 2 --b 3 --gen-cap 3 --target-cap 10 --node-cap 1 --greedy false"));
        assert_eq!(out.exit_code, EXIT_INCONCLUSIVE);
        assert_eq!(out.report.results["status"], "inconclusive");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
