//! Machine-readable run reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scenario::Scenario;

pub const SCHEMA_VERSION: &str = "holoshannon.report.v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub group: String,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// `|value - reference|` against an absolute tolerance.
    pub fn absolute(group: &str, name: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        let residual = (value - reference).abs();
        Self {
            name: name.to_string(),
            group: group.to_string(),
            value: Some(value),
            reference: Some(reference),
            residual: Some(residual),
            tolerance: Some(tolerance),
            passed: residual <= tolerance,
            note: None,
        }
    }

    /// `|value - reference| / |reference|` against a relative tolerance.
    pub fn relative(group: &str, name: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        let residual = (value - reference).abs() / reference.abs();
        Self {
            residual: Some(residual),
            passed: residual <= tolerance,
            ..Self::absolute(group, name, value, reference, tolerance)
        }
    }

    /// `value <= bound`.
    pub fn at_most(group: &str, name: &str, value: f64, bound: f64) -> Self {
        Self {
            name: name.to_string(),
            group: group.to_string(),
            value: Some(value),
            reference: None,
            residual: None,
            tolerance: Some(bound),
            passed: value <= bound,
            note: None,
        }
    }

    pub fn flag(group: &str, name: &str, passed: bool) -> Self {
        Self {
            name: name.to_string(),
            group: group.to_string(),
            value: None,
            reference: None,
            residual: None,
            tolerance: None,
            passed,
            note: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn error(group: &str, name: &str, message: impl Into<String>) -> Self {
        Self {
            note: Some(message.into()),
            ..Self::flag(group, name, false)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub seed: u64,
    pub scenario: Scenario,
    /// Headline numbers keyed by name, in sorted order.
    pub metrics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    /// Wall-clock seconds per pipeline; only present when asked for, since
    /// it breaks byte-for-byte reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(scenario: &Scenario) -> Self {
        Self {
            schema: SCHEMA_VERSION.to_string(),
            seed: scenario.seed,
            scenario: scenario.clone(),
            metrics: BTreeMap::new(),
            checks: Vec::new(),
            timings: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check: `name,group,value,reference,residual,tolerance,passed`.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        let mut out = String::from("name,group,value,reference,residual,tolerance,passed\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                c.name,
                c.group,
                opt(c.value),
                opt(c.reference),
                opt(c.residual),
                opt(c.tolerance),
                c.passed
            ));
        }
        out
    }
}
