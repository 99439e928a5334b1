//! Verification reports shared by the algebra checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketCheck {
    pub bracket: String,
    pub expected: String,
    pub got: String,
    pub max_dev: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub title: String,
    pub tol: f64,
    pub entries: Vec<BracketCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AlgebraReport {
    pub fn new(title: impl Into<String>, tol: f64) -> Self {
        AlgebraReport { title: title.into(), tol, entries: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, bracket: impl Into<String>, expected: impl Into<String>, got: impl Into<String>, max_dev: f64) {
        let pass = max_dev <= self.tol;
        self.entries.push(BracketCheck {
            bracket: bracket.into(),
            expected: expected.into(),
            got: got.into(),
            max_dev,
            pass,
        });
    }

    /// Record a check whose pass/fail is decided by the caller.
    pub fn push_flag(&mut self, bracket: impl Into<String>, expected: impl Into<String>, got: impl Into<String>, max_dev: f64, pass: bool) {
        self.entries.push(BracketCheck {
            bracket: bracket.into(),
            expected: expected.into(),
            got: got.into(),
            max_dev,
            pass,
        });
    }

    pub fn extend(&mut self, other: AlgebraReport) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.entries.iter().filter(|e| !e.pass).map(|e| e.bracket.clone()).collect()
    }

    pub fn max_dev(&self) -> f64 {
        self.entries.iter().map(|e| e.max_dev).fold(0.0, f64::max)
    }

    pub fn into_result(self) -> Result<Self> {
        if self.all_pass() {
            Ok(self)
        } else {
            Err(Error::Mismatch(Box::new(self)))
        }
    }
}
