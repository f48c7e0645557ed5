//! Check results shared by every verification routine.

use serde::Serialize;

/// One named check: worst residual over the samples it visited and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// Stable identifier of the identity or condition being checked.
    pub reference: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Informational checks are reported but never fail a run.
    pub gating: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, reference: impl Into<String>, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            reference: reference.into(),
            samples: 0,
            max_residual: 0.0,
            tolerance,
            passed: true,
            gating: true,
            notes: Vec::new(),
        }
    }

    /// Fold one residual into the maximum. NaN counts as an infinite residual.
    pub fn observe(&mut self, residual: f64) {
        let r = if residual.is_nan() { f64::INFINITY } else { residual.abs() };
        self.max_residual = self.max_residual.max(r);
        self.passed &= r <= self.tolerance;
    }

    pub fn sample(&mut self) {
        self.samples += 1;
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }

    /// Force a failing verdict independent of the residual (e.g. a violated precondition).
    pub fn fail(&mut self, reason: impl Into<String>) {
        self.passed = false;
        self.notes.push(reason.into());
    }

    pub fn verdict(&self) -> &'static str {
        match (self.passed, self.gating) {
            (true, true) => "pass",
            (false, true) => "FAIL",
            (true, false) => "holds",
            (false, false) => "does not hold",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observe_tracks_maximum_and_verdict() {
        let mut r = CheckReport::new("x", "y", 1e-8);
        r.observe(1e-10);
        assert!(r.passed);
        r.observe(-3e-8);
        assert!(!r.passed);
        assert_eq!(r.max_residual, 3e-8);
        r.observe(f64::NAN);
        assert!(r.max_residual.is_infinite());
    }
}
