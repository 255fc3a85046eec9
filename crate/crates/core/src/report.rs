//! Outcome of a single identity check.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// Which side of `tolerance` counts as passing. Most checks bound an error
/// from above; the no-go floor bounds an objective from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub check: String,
    pub status: Status,
    pub max_error: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub samples: usize,
    pub seed: u64,
    pub wall_time_ms: u64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Passes iff `max_error ≤ tolerance`. NaN never passes.
    pub fn upper(
        suite: &str,
        check: &str,
        max_error: f64,
        tolerance: f64,
        samples: usize,
        seed: u64,
    ) -> Self {
        let ok = max_error <= tolerance;
        Self::build(suite, check, ok, max_error, tolerance, Bound::Upper, samples, seed)
    }

    /// Passes iff `value ≥ floor`.
    pub fn lower(suite: &str, check: &str, value: f64, floor: f64, samples: usize, seed: u64) -> Self {
        let ok = value >= floor;
        Self::build(suite, check, ok, value, floor, Bound::Lower, samples, seed)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        suite: &str,
        check: &str,
        ok: bool,
        max_error: f64,
        tolerance: f64,
        bound: Bound,
        samples: usize,
        seed: u64,
    ) -> Self {
        Self {
            suite: suite.to_string(),
            check: check.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            max_error,
            tolerance,
            bound,
            samples,
            seed,
            wall_time_ms: 0,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Marks the check failed regardless of its number, recording why.
    pub fn fail_with(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
