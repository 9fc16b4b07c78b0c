//! Seeded randomized verification suites and the report they produce.
//!
//! Every check owns a ChaCha8 stream: the generator is seeded with the run
//! seed and switched to a stream derived from the check name, so a check's
//! samples do not depend on which other checks run. Checks execute in
//! parallel and their records are sorted by name before emission.

mod algebroid;
pub mod commands;
pub mod fixtures;
mod groupoid;
mod iwasawa;
mod poisson;
mod relations;
mod semiclassical;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::linalg::{Matrix, Vector};
use crate::lorentz::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Relations,
    Iwasawa,
    Groupoid,
    Algebroid,
    Poisson,
    Semiclassical,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Relations, Suite::Iwasawa, Suite::Groupoid, Suite::Algebroid, Suite::Poisson, Suite::Semiclassical];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Iwasawa => "iwasawa",
            Suite::Groupoid => "groupoid",
            Suite::Algebroid => "algebroid",
            Suite::Poisson => "poisson",
            Suite::Semiclassical => "semiclassical",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("sphere dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("unknown suite `{0}` (expected one of relations, iwasawa, groupoid, algebroid, poisson, semiclassical)")]
    UnknownSuite(String),
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
    #[error("tolerance `{name}` must be a finite non-negative number, got {value}")]
    BadTolerance { name: String, value: f64 },
    #[error("expected NAME=VALUE, got `{0}`")]
    MalformedOverride(String),
}

/// Named tolerances with their defaults. `orth`, `recon` and `matching` also
/// configure the geometric operations themselves.
pub const DEFAULT_TOLERANCES: [(&str, f64); 17] = [
    ("orth", 1e-10),
    ("recon", 1e-10),
    ("matching", 1e-8),
    ("factorization", 1e-12),
    ("gb-axioms", 1e-10),
    ("z-axioms", 1e-9),
    ("fd-relative", 1e-4),
    ("closed-jacobi", 1e-9),
    ("frame-identity", 1e-10),
    ("p0-vanishing", 1e-10),
    ("poisson-jacobi", 1e-4),
    ("rank-threshold", 1e-8),
    ("bracket-identities", 1e-9),
    ("semiclassical", 1e-12),
    ("beta-numeric", 1e-6),
    ("derivative", 1e-6),
    ("adjoint", 1e-10),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToleranceTable(BTreeMap<String, f64>);

impl Default for ToleranceTable {
    fn default() -> Self {
        Self(DEFAULT_TOLERANCES.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

impl ToleranceTable {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        if !self.0.contains_key(name) {
            return Err(ConfigError::UnknownTolerance(name.to_string()));
        }
        if !(value.is_finite() && value >= 0.0) {
            return Err(ConfigError::BadTolerance { name: name.to_string(), value });
        }
        self.0.insert(name.to_string(), value);
        Ok(())
    }

    /// Parses `NAME=VALUE`.
    pub fn apply_override(&mut self, text: &str) -> Result<(), ConfigError> {
        let (name, value) = text.split_once('=').ok_or_else(|| ConfigError::MalformedOverride(text.to_string()))?;
        let value: f64 = value.trim().parse().map_err(|_| ConfigError::MalformedOverride(text.to_string()))?;
        self.set(name.trim(), value)
    }

    pub fn geometry(&self) -> Tolerances {
        Tolerances { orth: self.get("orth"), recon: self.get("recon"), matching: self.get("matching") }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: ToleranceTable,
    pub suites: BTreeSet<Suite>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { n: 3, samples: 1000, seed: 42, tolerances: ToleranceTable::default(), suites: Suite::ALL.into() }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 {
            return Err(ConfigError::DimensionTooSmall(self.n));
        }
        if self.samples == 0 {
            return Err(ConfigError::NoSamples);
        }
        Ok(())
    }

    pub fn only(mut self, suites: &[Suite]) -> Self {
        self.suites = suites.iter().copied().collect();
        self
    }
}

/// One line of the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub suite: Suite,
    /// The property under test.
    pub anchor: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "text" => Ok(Self::Text),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.summary.pass
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// JSON lines: one object per check with `"kind":"check"`, then the summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&tagged("check", r));
            out.push('\n');
        }
        out.push_str(&tagged("summary", &self.summary));
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!(
                "{} {:<48} samples={:<6} residual={:.3e} tol={:.1e}\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.samples,
                r.max_residual,
                r.tolerance
            ));
        }
        let s = &self.summary;
        out.push_str(&format!("{}/{} checks passed (n={}, samples={}, seed={})\n", s.passed, s.checks, s.n, s.samples, s.seed));
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json_lines(),
            ReportFormat::Text => self.to_text(),
        }
    }
}

fn tagged<T: Serialize>(kind: &str, value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report values serialize");
    if let Value::Object(map) = &mut v {
        map.insert("kind".into(), Value::String(kind.into()));
    }
    v.to_string()
}

/// Per-check state handed to every check body.
pub(crate) struct Ctx<'a> {
    pub n: usize,
    pub samples: usize,
    pub rng: ChaCha8Rng,
    pub tol: &'a ToleranceTable,
}

impl Ctx<'_> {
    pub fn geometry(&self) -> Tolerances {
        self.tol.geometry()
    }

    /// Sample count for checks built on finite differences or linear solves.
    pub fn heavy_samples(&self) -> usize {
        (self.samples / 10).max(1)
    }

    pub fn capped(&self, cap: usize) -> usize {
        self.samples.min(cap)
    }
}

/// How a check compares its residual.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Threshold {
    Named(&'static str),
    /// Residual counts failed samples; any failure fails the check.
    Exact,
}

pub(crate) struct CheckDef {
    pub name: &'static str,
    pub suite: Suite,
    pub anchor: &'static str,
    pub threshold: Threshold,
    pub run: fn(&mut Ctx) -> Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Outcome {
    pub samples: usize,
    pub max_residual: f64,
    pub witness: Option<Value>,
}

/// Accumulates the worst residual and the sample that produced it.
#[derive(Default)]
pub(crate) struct Tracker {
    samples: usize,
    max: f64,
    failures: usize,
    witness: Option<Value>,
}

impl Tracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, residual: f64, witness: impl FnOnce() -> Value) {
        self.samples += 1;
        if self.max.is_nan() {
            return;
        }
        if residual.is_nan() || residual > self.max || self.witness.is_none() {
            self.max = residual;
            self.witness = Some(witness());
        }
    }

    /// Counts a boolean sample; keeps the first failing sample.
    pub fn tally(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// A sample whose evaluation failed outright.
    pub fn error(&mut self, err: impl fmt::Display, witness: impl FnOnce() -> Value) {
        let message = err.to_string();
        self.record(f64::INFINITY, || serde_json::json!({ "error": message, "input": witness() }));
    }

    /// Records an evaluated residual or the error that prevented it.
    pub fn outcome<E: fmt::Display>(&mut self, r: Result<f64, E>, witness: impl FnOnce() -> Value) {
        match r {
            Ok(v) => self.record(v, witness),
            Err(e) => self.error(e, witness),
        }
    }

    /// Residual comparison.
    pub fn finish(self) -> Outcome {
        Outcome { samples: self.samples, max_residual: self.max, witness: self.witness }
    }

    /// Failure count.
    pub fn finish_count(self) -> Outcome {
        Outcome { samples: self.samples, max_residual: self.failures as f64, witness: self.witness }
    }
}

pub(crate) fn vec_json(v: &Vector) -> Value {
    serde_json::json!(v.as_slice())
}

pub(crate) fn mat_json(m: &Matrix) -> Value {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    serde_json::json!(rows)
}

fn registry() -> Vec<CheckDef> {
    let mut all = Vec::new();
    all.extend(relations::checks());
    all.extend(iwasawa::checks());
    all.extend(groupoid::checks());
    all.extend(algebroid::checks());
    all.extend(poisson::checks());
    all.extend(semiclassical::checks());
    all
}

/// Names of all checks in the given suites.
pub fn check_names(suites: &BTreeSet<Suite>) -> Vec<&'static str> {
    let mut names: Vec<_> = registry().into_iter().filter(|c| suites.contains(&c.suite)).map(|c| c.name).collect();
    names.sort_unstable();
    names
}

fn stream_of(name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn run_one(def: &CheckDef, config: &SuiteConfig) -> CheckRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream_of(def.name));
    let mut ctx = Ctx { n: config.n, samples: config.samples, rng, tol: &config.tolerances };
    let outcome = (def.run)(&mut ctx);
    let tolerance = match def.threshold {
        Threshold::Named(t) => config.tolerances.get(t),
        Threshold::Exact => 0.0,
    };
    let pass = outcome.samples > 0 && outcome.max_residual <= tolerance;
    CheckRecord {
        name: def.name.to_string(),
        suite: def.suite,
        anchor: def.anchor.to_string(),
        samples: outcome.samples,
        max_residual: outcome.max_residual,
        tolerance,
        pass,
        witness: if pass { None } else { outcome.witness },
    }
}

pub fn run_suites(config: &SuiteConfig) -> Result<VerificationReport, ConfigError> {
    config.validate()?;
    let defs: Vec<CheckDef> = registry().into_iter().filter(|c| config.suites.contains(&c.suite)).collect();
    let mut records: Vec<CheckRecord> = defs.par_iter().map(|d| run_one(d, config)).collect();
    records.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = records.iter().filter(|r| r.pass).count();
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let summary = Summary {
        n: config.n,
        samples: config.samples,
        seed: config.seed,
        suites: config.suites.iter().copied().collect(),
        checks: records.len(),
        passed,
        failed: records.len() - passed,
        pass: passed == records.len(),
        timestamp,
    };
    Ok(VerificationReport { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert_eq!(SuiteConfig { samples: 0, ..Default::default() }.validate(), Err(ConfigError::NoSamples));
        assert_eq!(SuiteConfig { n: 1, ..Default::default() }.validate(), Err(ConfigError::DimensionTooSmall(1)));
        assert!(SuiteConfig::default().validate().is_ok());
    }

    #[test]
    fn tolerance_overrides() {
        let mut t = ToleranceTable::default();
        t.apply_override("z-axioms=1e-7").unwrap();
        assert_eq!(t.get("z-axioms"), 1e-7);
        assert!(matches!(t.apply_override("bogus=1"), Err(ConfigError::UnknownTolerance(_))));
        assert!(matches!(t.apply_override("recon"), Err(ConfigError::MalformedOverride(_))));
        assert!(matches!(t.apply_override("recon=-1"), Err(ConfigError::BadTolerance { .. })));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("other".parse::<Suite>().is_err());
    }

    #[test]
    fn check_names_are_unique_and_prefixed() {
        let names = check_names(&Suite::ALL.into());
        let unique: BTreeSet<_> = names.iter().collect();
        assert_eq!(unique.len(), names.len());
        for def in registry() {
            assert!(def.name.starts_with(def.suite.name()), "{}", def.name);
            assert!(!def.anchor.is_empty());
        }
    }

    #[test]
    fn tracker_keeps_worst_and_sticky_nan() {
        let mut t = Tracker::new();
        t.record(1.0, || serde_json::json!(1));
        t.record(3.0, || serde_json::json!(3));
        t.record(2.0, || serde_json::json!(2));
        let o = t.finish();
        assert_eq!((o.samples, o.max_residual, o.witness), (3, 3.0, Some(serde_json::json!(3))));
        let mut t = Tracker::new();
        t.record(f64::NAN, || serde_json::json!("nan"));
        t.record(5.0, || serde_json::json!(5));
        assert!(t.finish().max_residual.is_nan());
    }
}
