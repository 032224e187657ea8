//! Pass/fail records produced by the identity checks.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Sortable key naming the failing instance, e.g. `k=3,j=1`.
    pub case: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), checked: 0, violations: Vec::new() }
    }

    /// Records one check; `detail` is only built on failure.
    pub fn check(&mut self, ok: bool, case: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation { case: case(), detail: detail() });
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Puts violations in canonical order so output does not depend on
    /// scheduling.
    pub fn sort(&mut self) {
        self.violations.sort_by(|a, b| a.case.cmp(&b.case).then_with(|| a.detail.cmp(&b.detail)));
    }
}
