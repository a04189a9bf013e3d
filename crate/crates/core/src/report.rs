//! Check reports shared by the doctrine, bicategory and adjunction checks.

use std::fmt::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// No instance of the check was available.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    /// Instances whose whole parameter space was enumerated.
    pub exhaustive_instances: u64,
    /// Instances checked on random samples only.
    pub sampled_instances: u64,
    /// Instances skipped because an object they need is not available.
    pub skipped_instances: u64,
    /// Individual comparisons performed.
    pub comparisons: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    /// A check decided in one step.
    pub fn single(id: &str, holds: bool, comparisons: u64, witness: Option<String>) -> CheckResult {
        CheckResult {
            id: id.into(),
            status: if holds { Status::Pass } else { Status::Fail },
            exhaustive_instances: 1,
            sampled_instances: 0,
            skipped_instances: 0,
            comparisons,
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Whether every available instance was enumerated in full.
    pub fn exhaustive(&self) -> bool {
        self.sampled_instances == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), checks: vec![] }
    }

    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let mode = if c.sampled_instances == 0 {
                format!("exhaustive, {} instances", c.exhaustive_instances)
            } else {
                format!("{} exhaustive + {} sampled instances", c.exhaustive_instances, c.sampled_instances)
            };
            let skipped = if c.skipped_instances > 0 { format!(", {} skipped", c.skipped_instances) } else { String::new() };
            let _ = writeln!(out, "  {status} {:<32} {mode}, {} comparisons{skipped}", c.id, c.comparisons);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "       witness: {w}");
            }
        }
        let verdict = if self.passed() { "all checks pass" } else { "violations found" };
        let _ = writeln!(out, "{verdict}");
        out
    }
}
