//! Verification reports shared by all exhaustive checkers.

use serde::{Deserialize, Serialize};

/// Default cap on the number of violations a checker keeps.
pub const DEFAULT_VIOLATION_LIMIT: usize = 10;

/// One failed identity instance: the basis tuple it was evaluated on and the
/// nonzero residual element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub inputs: Vec<String>,
    pub residual: String,
}

/// Outcome of one exhaustive check. `status` is `pass` exactly when
/// `violations` is empty.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub subject: String,
    pub status: Status,
    pub violations: Vec<Violation>,
    pub timing_ms: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl CheckReport {
    /// Builds a report from the collected violations, sorting them into
    /// canonical order and truncating to `limit` so output is deterministic
    /// regardless of how the enumeration was partitioned.
    pub fn new(
        subject: impl Into<String>,
        mut violations: Vec<Violation>,
        limit: usize,
        timing_ms: u128,
    ) -> Self {
        let status = if violations.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        violations.sort();
        violations.dedup();
        violations.truncate(limit);
        CheckReport {
            subject: subject.into(),
            status,
            violations,
            timing_ms,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Merges sub-reports under a combined subject line.
    pub fn merge(subject: impl Into<String>, parts: Vec<CheckReport>) -> Self {
        let timing = parts.iter().map(|r| r.timing_ms).sum();
        let mut violations = Vec::new();
        for part in parts {
            for v in part.violations {
                let mut inputs = vec![format!("[{}]", part.subject)];
                inputs.extend(v.inputs);
                violations.push(Violation {
                    inputs,
                    residual: v.residual,
                });
            }
        }
        let status = if violations.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckReport {
            subject: subject.into(),
            status,
            violations,
            timing_ms: timing,
        }
    }
}
