//! Validation reports.
//!
//! Every checker in this crate returns a [`ValidationReport`]: a list of
//! recorded failures (each naming the violated check, a message, and the
//! witnessing labels) together with counters describing how much work was
//! done.  A report passes exactly when no failure was recorded, so reports
//! from independent checkers can be merged freely.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub check: String,
    pub message: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    failures: Vec<Failure>,
    stats: BTreeMap<String, u64>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, check: &str, message: impl Into<String>, witness: Vec<String>) {
        self.failures.push(Failure {
            check: check.to_string(),
            message: message.into(),
            witness,
        });
    }

    pub fn bump(&mut self, stat: &str, by: u64) {
        *self.stats.entry(stat.to_string()).or_insert(0) += by;
    }

    pub fn set_stat(&mut self, stat: &str, value: u64) {
        self.stats.insert(stat.to_string(), value);
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.failures.extend(other.failures);
        for (k, v) in other.stats {
            *self.stats.entry(k).or_insert(0) += v;
        }
    }

    pub fn failures(&self) -> &[Failure] {
        &self.failures
    }

    pub fn stats(&self) -> &BTreeMap<String, u64> {
        &self.stats
    }

    /// Failures of one named check, for targeted assertions.
    pub fn failures_for(&self, check: &str) -> Vec<&Failure> {
        self.failures.iter().filter(|f| f.check == check).collect()
    }

    /// Human-readable multi-line rendering, deterministic across runs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.pass() {
            out.push_str("pass\n");
        } else {
            let _ = writeln!(out, "fail ({} failure(s))", self.failures.len());
            for f in &self.failures {
                let _ = writeln!(out, "  [{}] {}", f.check, f.message);
                if !f.witness.is_empty() {
                    let _ = writeln!(out, "    witness: {}", f.witness.join(" ; "));
                }
            }
        }
        for (k, v) in &self.stats {
            let _ = writeln!(out, "  {k}: {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_passes_and_failures_flip_it() {
        let mut r = ValidationReport::new();
        assert!(r.pass());
        r.bump("checked", 3);
        assert!(r.pass());
        r.fail("law", "broken", vec!["f".into()]);
        assert!(!r.pass());
        assert_eq!(r.failures_for("law").len(), 1);
    }

    #[test]
    fn merge_concatenates_failures_and_adds_stats() {
        let mut a = ValidationReport::new();
        a.bump("checked", 1);
        let mut b = ValidationReport::new();
        b.bump("checked", 2);
        b.fail("x", "boom", vec![]);
        a.merge(b);
        assert!(!a.pass());
        assert_eq!(a.stats()["checked"], 3);
    }
}
