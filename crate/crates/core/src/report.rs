//! Per-condition verification reports.
//!
//! Every verifier in the crate returns a [`CheckReport`]: one entry per
//! checked condition, with `passed = None` for conditions that do not apply
//! to the given structure (for instance Nobusawa-only axioms on a plain
//! gamma ring), and a minimal counterexample tuple as witness on failure.
//! Witnesses are element labels, ordered the way the condition quantifies
//! its variables, so the scan order makes the first (smallest) violation
//! the reported one.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Condition {
    pub condition_id: String,
    /// `Some(true)` passed, `Some(false)` failed, `None` not applicable.
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub structure: String,
    pub conditions: Vec<Condition>,
    pub passed: bool,
}

impl CheckReport {
    pub fn new(structure: impl Into<String>) -> Self {
        CheckReport {
            structure: structure.into(),
            conditions: Vec::new(),
            passed: true,
        }
    }

    pub fn pass(&mut self, id: &str) {
        self.conditions.push(Condition {
            condition_id: id.to_string(),
            passed: Some(true),
            witness: None,
        });
    }

    pub fn fail(&mut self, id: &str, witness: Vec<String>) {
        self.conditions.push(Condition {
            condition_id: id.to_string(),
            passed: Some(false),
            witness: Some(witness),
        });
        self.passed = false;
    }

    pub fn not_applicable(&mut self, id: &str) {
        self.conditions.push(Condition {
            condition_id: id.to_string(),
            passed: None,
            witness: None,
        });
    }

    /// Record a condition from an `Option<witness>` (None means pass).
    pub fn record(&mut self, id: &str, violation: Option<Vec<String>>) {
        match violation {
            None => self.pass(id),
            Some(w) => self.fail(id, w),
        }
    }

    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.condition_id == id)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.passed &= other.passed;
        self.conditions.extend(other.conditions);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
