//! Machine-readable verification reports.
//!
//! A report is a deterministic function of its inputs: checks appear in the
//! order they were run, locations are rendered from stable simplex ids, and
//! timing is only included when explicitly requested.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cech::HomElement;
use crate::validation::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub checked: usize,
    pub failed: usize,
    /// Where the first failures occurred.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub locations: Vec<String>,
    /// Outcome of an informational check, which never affects the verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

/// Locations kept per check.
const MAX_LOCATIONS: usize = 8;

impl VerificationReport {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        VerificationReport {
            tool: "twcx".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            passed: true,
            checks: Vec::new(),
            notes: Vec::new(),
            timing_ms: None,
        }
    }

    fn push(&mut self, check: Check) {
        if check.status == Status::Fail {
            self.passed = false;
        }
        self.checks.push(check);
    }

    /// Adds an exhaustive identity check; `locate` renders a violation.
    pub fn validation(
        &mut self,
        name: impl Into<String>,
        r: &ValidationReport,
        locate: impl Fn(&crate::validation::Violation) -> String,
    ) {
        self.push(Check {
            name: name.into(),
            status: if r.passed() { Status::Pass } else { Status::Fail },
            checked: r.checked,
            failed: r.failed,
            locations: r.violations.iter().take(MAX_LOCATIONS).map(locate).collect(),
            holds: None,
            note: None,
        });
        self.notes.extend(r.notes.iter().cloned());
    }

    /// Adds a single yes/no check.
    pub fn boolean(&mut self, name: impl Into<String>, ok: bool, location: Option<String>) {
        self.push(Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            checked: 1,
            failed: usize::from(!ok),
            locations: location.into_iter().collect(),
            holds: None,
            note: None,
        });
    }

    /// Adds a check that an element is exactly zero, locating its first
    /// non-zero block.
    pub fn zero(&mut self, name: impl Into<String>, residual: &HomElement) {
        let location = residual.first_block_key().map(|k| {
            let space = residual.source().space();
            format!(
                "bidegree ({},{}) simplex {} degree {}",
                k.p,
                k.q,
                space.id(k.p, k.x),
                k.n
            )
        });
        self.boolean(name, location.is_none(), location);
    }

    /// Records a result that does not affect the verdict.
    pub fn info(&mut self, name: impl Into<String>, ok: bool, note: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Skip,
            checked: 0,
            failed: 0,
            locations: Vec::new(),
            holds: Some(ok),
            note: Some(note.into()),
        });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// `0` when every check passed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{} {} ({}): {verdict}", self.tool, self.command, self.version);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed {seed}");
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "info",
            };
            match c.holds {
                Some(h) => {
                    let _ = write!(s, "  [{tag}] {}: {}", c.name, if h { "yes" } else { "no" });
                }
                None => {
                    let _ = write!(s, "  [{tag}] {} ({}/{} failed)", c.name, c.failed, c.checked);
                }
            }
            if let Some(n) = &c.note {
                let _ = write!(s, " - {n}");
            }
            s.push('\n');
            for l in &c.locations {
                let _ = writeln!(s, "      at {l}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(s, "  time {t} ms");
        }
        s
    }
}
