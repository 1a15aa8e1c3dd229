//! Structured results for identity verification sweeps.

use serde::Serialize;

/// Outcome of sweeping one identity over a range of inputs.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    /// Which identity was checked, e.g. `"string-1"`.
    pub identity: String,
    /// Human-readable description of the swept range.
    pub range: String,
    /// Number of instances checked.
    pub samples_checked: u64,
    /// One line per failing instance; empty on success.
    pub counterexamples: Vec<String>,
}

impl IdentityReport {
    pub fn new(identity: impl Into<String>, range: impl Into<String>) -> Self {
        IdentityReport {
            identity: identity.into(),
            range: range.into(),
            samples_checked: 0,
            counterexamples: Vec::new(),
        }
    }

    pub fn is_success(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// One-line summary suitable for terminal output.
    pub fn summary(&self) -> String {
        if self.is_success() {
            format!(
                "{}: ok ({} instances over {})",
                self.identity, self.samples_checked, self.range
            )
        } else {
            format!(
                "{}: {} counterexamples out of {} instances over {} (first: {})",
                self.identity,
                self.counterexamples.len(),
                self.samples_checked,
                self.range,
                self.counterexamples[0]
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn success_and_failure_summaries() {
        let mut r = IdentityReport::new("string-1", "n <= 4");
        r.samples_checked = 10;
        assert!(r.is_success());
        assert!(r.summary().contains("ok"));
        r.counterexamples.push("g=0 b=(1,1) lhs=1 rhs=2".into());
        assert!(!r.is_success());
        assert!(r.summary().contains("counterexample"));
        assert!(r.summary().contains("lhs=1"));
    }

    #[test]
    fn serializes_to_json() {
        let mut r = IdentityReport::new("dilaton", "complexity <= 5");
        r.samples_checked = 3;
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"identity\":\"dilaton\""));
        assert!(s.contains("\"samples_checked\":3"));
    }
}
