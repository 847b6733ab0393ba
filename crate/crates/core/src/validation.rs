//! Collected identity violations.

use std::fmt;

use serde::Serialize;

/// Cap on stored violation records; the total count is always exact.
const MAX_RECORDED: usize = 64;

/// One failed instance of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Which identity or clause failed, in readable form.
    pub identity: String,
    /// Simplicial level of the element the identity was evaluated on.
    pub level: usize,
    /// The operator indices of the instance (for example `[i, j]`).
    pub indices: Vec<usize>,
    /// Index of the element within its level.
    pub element: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at level {} indices {:?} element {}",
            self.identity, self.level, self.indices, self.element
        )
    }
}

/// Outcome of an exhaustive identity check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Number of identity instances evaluated.
    pub checked: usize,
    /// Number of failed instances.
    pub failed: usize,
    /// The first few failures, in evaluation order.
    pub violations: Vec<Violation>,
    /// Free-form remarks (orientation choices and similar).
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Records one evaluated instance.
    pub fn check(
        &mut self,
        ok: bool,
        identity: impl FnOnce() -> String,
        level: usize,
        indices: &[usize],
        element: usize,
    ) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.violations.len() < MAX_RECORDED {
                self.violations.push(Violation {
                    identity: identity(),
                    level,
                    indices: indices.to_vec(),
                    element,
                });
            }
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        for v in other.violations {
            if self.violations.len() < MAX_RECORDED {
                self.violations.push(v);
            }
        }
        self.notes.extend(other.notes);
    }

    /// Whether any recorded violation mentions `needle` in its identity name.
    pub fn mentions(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.identity.contains(needle))
    }
}
