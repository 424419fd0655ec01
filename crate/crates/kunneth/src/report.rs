//! Check outcomes with stable identifiers.
//!
//! Every checker produces `CheckItem`s whose `id` comes from [`check_id`];
//! CI can grep a structured report for `murre.B` or `gs.pass.orthogonality`
//! and rely on the names never changing.

use std::fmt::Write as _;

/// Stable check identifiers.
pub mod check_id {
    pub const FAMILY_IDEMPOTENT: &str = "family.idempotent";
    pub const FAMILY_HYPOTHESIS: &str = "family.hypothesis";
    pub const FAMILY_SELF_DUAL: &str = "family.selfdual";
    pub const CK_IDEMPOTENT: &str = "ck.idempotent";
    pub const CK_ORTHOGONALITY: &str = "ck.orthogonality";
    pub const CK_SUM: &str = "ck.sum";
    pub const CK_KUNNETH: &str = "ck.kunneth";
    pub const CK_SELF_DUAL: &str = "ck.selfdual";
    pub const REALIZATION_SUM: &str = "realization.sum";
    pub const REALIZATION_IDEMPOTENT: &str = "realization.idempotent";
    pub const REALIZATION_ORTHOGONALITY: &str = "realization.orthogonality";
    pub const REALIZATION_INTERTWINE: &str = "realization.intertwine";
    pub const MURRE_B: &str = "murre.B";
    pub const MURRE_D: &str = "murre.D";
    pub const FILTRATION_COMPARE: &str = "filtration.compare";
    pub const GS_HYPOTHESIS: &str = "gs.hypothesis";
    pub const GS_PASS_ORTHOGONALITY: &str = "gs.pass.orthogonality";
    pub const GS_WITNESSES: &str = "gs.witnesses";
    pub const LEFSCHETZ_CERTIFICATE: &str = "lefschetz.certificate";
    pub const EXPECTATION: &str = "expect.match";
}

/// One check outcome. `location` carries the indices of the first
/// counterexample (pair, degree, level) when the check fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub id: String,
    pub subject: String,
    pub passed: bool,
    pub location: Vec<i64>,
    pub detail: String,
}

impl CheckItem {
    pub fn pass(id: &str, subject: &str) -> Self {
        Self {
            id: id.to_string(),
            subject: subject.to_string(),
            passed: true,
            location: Vec::new(),
            detail: String::new(),
        }
    }

    pub fn fail(id: &str, subject: &str, location: Vec<i64>, detail: impl Into<String>) -> Self {
        Self {
            id: id.to_string(),
            subject: subject.to_string(),
            passed: false,
            location,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn find(&self, id: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn find_for(&self, id: &str, subject: &str) -> Option<&CheckItem> {
        self.items
            .iter()
            .find(|i| i.id == id && i.subject == subject)
    }

    /// Human-readable listing, one line per check.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            let status = if item.passed { "ok  " } else { "FAIL" };
            let _ = write!(out, "{status} {:<28} {}", item.id, item.subject);
            if !item.location.is_empty() {
                let loc: Vec<String> = item.location.iter().map(i64::to_string).collect();
                let _ = write!(out, " at ({})", loc.join(", "));
            }
            if !item.detail.is_empty() {
                let _ = write!(out, "  [{}]", item.detail);
            }
            out.push('\n');
        }
        out
    }

    /// Machine-readable lines: `check <id> <subject> pass|fail [loc..]`.
    pub fn render_structured_lines(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            let _ = write!(
                out,
                "check {} {} {}",
                item.id,
                item.subject,
                if item.passed { "pass" } else { "fail" }
            );
            for l in &item.location {
                let _ = write!(out, " {l}");
            }
            out.push('\n');
        }
        out
    }
}
