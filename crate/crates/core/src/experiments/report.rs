use alloc::string::String;
use alloc::vec::Vec;

use super::{ExperimentConfig, Scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One named time series sampled at [`ExperimentReport::times`].
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: &'static str,
    pub values: Vec<f64>,
}

/// One gate: `passed` records `value <= limit` (or `>=`, as named).
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit,
            passed: value <= limit,
        }
    }

    pub fn at_least(name: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            limit,
            passed: value >= limit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlowUp {
    pub t: f64,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub scenario: Scenario,
    pub config: ExperimentConfig,
    pub times: Vec<f64>,
    pub series: Vec<Series>,
    pub checks: Vec<Check>,
    /// Named scalar results (reference values, thresholds derived at run time).
    pub scalars: Vec<(&'static str, f64)>,
    pub conservation_drift: f64,
    pub blow_up: Option<BlowUp>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|s| s.name == name).map(|s| s.values.as_slice())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.scalars.iter().find(|s| s.0 == name).map(|s| s.1)
    }
}
