//! Property suites: seeded or exhaustive instance families checked against
//! the brute-force oracles, run in parallel and aggregated by instance index.
//!
//! Every instance is a JSON document, so a failing one can be written into a
//! report and replayed later with the same configuration.

mod conditions;
mod creatures;
mod qhn;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::points::Budget;
use crate::qhn::Strictness;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::time::Instant;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Instance count for seeded suites; `None` uses the suite default.
    #[serde(default)]
    pub count: Option<usize>,
    /// Forces one alphabet where a suite would otherwise mix several.
    #[serde(default)]
    pub alphabet: Option<Alphabet>,
    pub z_max: usize,
    pub delta_max: usize,
    pub window_max: u32,
    /// Largest family handed to the packing-number oracle.
    pub oracle_family_max: usize,
    pub strictness: Strictness,
    pub max_points: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 1,
            count: None,
            alphabet: None,
            z_max: 6,
            delta_max: 5,
            window_max: 16,
            oracle_family_max: 12,
            strictness: Strictness::Relaxed,
            max_points: Budget::default().max_points,
        }
    }
}

impl SuiteConfig {
    pub fn budget(&self) -> Budget {
        Budget { max_points: self.max_points, max_family: self.oracle_family_max }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_points > Budget::default().max_points {
            return Err(Error::Precondition(format!("point budget {} exceeds the global cap", self.max_points)));
        }
        if self.oracle_family_max > crate::oracle::MAX_ORACLE_FAMILY {
            return Err(Error::Precondition(format!("oracle family budget {} is above {}", self.oracle_family_max, crate::oracle::MAX_ORACLE_FAMILY)));
        }
        if self.z_max == 0 || self.delta_max == 0 || self.window_max == 0 {
            return Err(Error::Precondition("size budgets must be positive".into()));
        }
        Ok(())
    }

    fn count_or(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail(String),
    Skip(String),
}

/// The outcome of one property on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub property: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl Check {
    pub fn pass(property: &str) -> Self {
        Check { property: property.into(), verdict: Verdict::Pass }
    }

    pub fn fail(property: &str, detail: impl Into<String>) -> Self {
        Check { property: property.into(), verdict: Verdict::Fail(detail.into()) }
    }

    pub fn skip(property: &str, reason: impl Into<String>) -> Self {
        Check { property: property.into(), verdict: Verdict::Skip(reason.into()) }
    }

    /// Pass when `ok`, else fail with the lazily built detail.
    pub fn expect(property: &str, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Check::pass(property)
        } else {
            Check::fail(property, detail())
        }
    }
}

pub trait Suite: Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn count(&self, cfg: &SuiteConfig) -> usize;
    fn generate(&self, cfg: &SuiteConfig, index: usize) -> Result<Value>;
    fn check(&self, cfg: &SuiteConfig, instance: &Value) -> Result<Vec<Check>>;
}

pub fn all() -> Vec<&'static dyn Suite> {
    let mut out: Vec<&'static dyn Suite> = Vec::new();
    out.extend(creatures::SUITES);
    out.extend(conditions::SUITES);
    out.extend(qhn::SUITES);
    out
}

pub fn find(name: &str) -> Option<&'static dyn Suite> {
    all().into_iter().find(|s| s.name() == name)
}

pub fn names() -> Vec<&'static str> {
    all().iter().map(|s| s.name()).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub property: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

/// A failing property together with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub suite: String,
    pub property: String,
    pub index: usize,
    pub detail: String,
    pub config: SuiteConfig,
    pub instance: Value,
}

/// An instance that could not be generated or checked at all.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceError {
    pub index: usize,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub config: SuiteConfig,
    pub instances: usize,
    pub properties: Vec<Tally>,
    pub counterexamples: Vec<Counterexample>,
    pub errors: Vec<InstanceError>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.properties.iter().all(|t| t.failed == 0)
    }

    /// Whether some instance stopped on an enumeration budget.
    pub fn budget_exceeded(&self) -> bool {
        self.errors.iter().any(|e| e.code == "enumeration-too-large")
    }

    pub fn tally(&self, property: &str) -> Option<&Tally> {
        self.properties.iter().find(|t| t.property == property)
    }

    /// One line per property: `suite,property,passed,failed,skipped`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,property,passed,failed,skipped\n");
        for t in &self.properties {
            out.push_str(&format!("{},{},{},{},{}\n", self.suite, t.property, t.passed, t.failed, t.skipped));
        }
        if !self.errors.is_empty() {
            out.push_str(&format!("{},errors,0,{},0\n", self.suite, self.errors.len()));
        }
        out
    }
}

enum Outcome {
    Checked(Value, Vec<Check>),
    Broken(InstanceError),
}

fn broken(index: usize, e: &Error) -> Outcome {
    Outcome::Broken(InstanceError { index, code: e.code().into(), message: e.to_string() })
}

fn run_one(suite: &dyn Suite, cfg: &SuiteConfig, index: usize) -> Outcome {
    let instance = match suite.generate(cfg, index) {
        Ok(v) => v,
        Err(e) => return broken(index, &e),
    };
    match suite.check(cfg, &instance) {
        Ok(checks) => Outcome::Checked(instance, checks),
        Err(e) => broken(index, &e),
    }
}

/// Runs every instance of `suite` in parallel; aggregation follows instance order.
pub fn run(suite: &dyn Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let count = suite.count(cfg);
    let outcomes: Vec<Outcome> = (0..count).into_par_iter().map(|i| run_one(suite, cfg, i)).collect();

    let mut order: Vec<String> = Vec::new();
    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    let mut errors = Vec::new();
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Broken(e) => errors.push(e),
            Outcome::Checked(instance, checks) => {
                for c in checks {
                    let t = tallies.entry(c.property.clone()).or_insert_with(|| {
                        order.push(c.property.clone());
                        Tally { property: c.property.clone(), ..Tally::default() }
                    });
                    match c.verdict {
                        Verdict::Pass => t.passed += 1,
                        Verdict::Skip(_) => t.skipped += 1,
                        Verdict::Fail(detail) => {
                            t.failed += 1;
                            counterexamples.push(Counterexample {
                                suite: suite.name().into(),
                                property: c.property,
                                index,
                                detail,
                                config: cfg.clone(),
                                instance: instance.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    let properties = order.iter().map(|p| tallies[p].clone()).collect();
    Ok(SuiteReport {
        schema: REPORT_SCHEMA,
        suite: suite.name().into(),
        config: cfg.clone(),
        instances: count,
        properties,
        counterexamples,
        errors,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn run_named(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let suite = find(name).ok_or_else(|| Error::Precondition(format!("unknown suite {name:?}")))?;
    run(suite, cfg)
}

/// Re-checks a stored counterexample; the result holds the checks of the
/// recorded property only.
pub fn replay(cx: &Counterexample) -> Result<Vec<Check>> {
    let suite = find(&cx.suite).ok_or_else(|| Error::Precondition(format!("unknown suite {:?}", cx.suite)))?;
    let checks = suite.check(&cx.config, &cx.instance)?;
    Ok(checks.into_iter().filter(|c| c.property == cx.property).collect())
}

/// Either a whole report or a single counterexample.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ReplayInput {
    Report(SuiteReport),
    Single(Counterexample),
}

impl ReplayInput {
    pub fn counterexamples(&self) -> Vec<&Counterexample> {
        match self {
            ReplayInput::Report(r) => r.counterexamples.iter().collect(),
            ReplayInput::Single(c) => vec![c],
        }
    }
}

fn to_value<T: Serialize>(t: &T) -> Result<Value> {
    serde_json::to_value(t).map_err(|e| Error::Malformed(e.to_string()))
}

fn from_value<T: DeserializeOwned>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Malformed(e.to_string()))
}

fn pick_alphabet(cfg: &SuiteConfig, choices: &[Alphabet], index: usize) -> Alphabet {
    cfg.alphabet.clone().unwrap_or_else(|| choices[index % choices.len()].clone())
}

fn z2() -> Alphabet {
    Alphabet::binary()
}

fn z3() -> Alphabet {
    Alphabet::cyclic(3).expect("order 3")
}
