//! Structured pass/fail reports for identity suites.
//!
//! Each suite produces one [`CheckReport`] holding a case table (both sides
//! of the identity, the absolute error, the tolerance, and the verdict) plus
//! free-form diagnostics such as the zero-mode policy or quadrature error
//! budgets. Reports serialize to JSON and round-trip exactly.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

/// One checked instance of an identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    /// Stable identifier within the suite (e.g. `"t=1.0/x=2.5"`).
    pub case_id: String,
    /// Human-readable summary of the inputs.
    pub inputs: String,
    /// Left-hand side as evaluated.
    pub lhs: f64,
    /// Right-hand side as evaluated.
    pub rhs: f64,
    /// |lhs − rhs|, exactly.
    pub abs_err: f64,
    /// Tolerance the error was judged against.
    pub tol: f64,
    /// Whether abs_err ≤ tol.
    pub pass: bool,
    /// Sample-point coordinates for pointwise cases (empty when the case is
    /// not tied to a point); consumed by the CSV dump.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coords: Vec<f64>,
}

impl CaseResult {
    /// Builds a case from both evaluated sides; the verdict is abs_err ≤ tol.
    pub fn new(
        case_id: impl Into<String>,
        inputs: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tol: f64,
    ) -> CaseResult {
        let abs_err = (lhs - rhs).abs();
        CaseResult {
            case_id: case_id.into(),
            inputs: inputs.into(),
            lhs,
            rhs,
            abs_err,
            tol,
            pass: abs_err <= tol,
            coords: Vec::new(),
        }
    }

    /// Attaches the sample point the case was evaluated at.
    pub fn at(mut self, coords: &[f64]) -> CaseResult {
        self.coords = coords.to_vec();
        self
    }

    /// Builds a failed case for a computation that errored out. Non-finite
    /// values do not survive JSON, so the error slot carries `f64::MAX` and
    /// the message is appended to the input summary.
    pub fn errored(
        case_id: impl Into<String>,
        inputs: impl Into<String>,
        message: &str,
    ) -> CaseResult {
        CaseResult {
            case_id: case_id.into(),
            inputs: format!("{} [error: {message}]", inputs.into()),
            lhs: 0.0,
            rhs: 0.0,
            abs_err: f64::MAX,
            tol: 0.0,
            pass: false,
            coords: Vec::new(),
        }
    }
}

/// Result of one identity suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Suite name as used on the command line (e.g. `"bubble"`).
    pub suite_id: String,
    /// Which identity the suite verifies, stated as the identity itself.
    pub paper_anchor: String,
    /// Ambient dimension the suite ran in.
    pub dimension: usize,
    /// Individual checked cases, in deterministic order.
    pub cases: Vec<CaseResult>,
    /// Conjunction of the case verdicts.
    pub overall_pass: bool,
    /// Wall-clock runtime of the suite in milliseconds.
    pub runtime_ms: u64,
    /// Free-form diagnostics: zero-mode policy, error budgets, flagged
    /// constant discrepancies, and similar context that is not pass/fail.
    pub diagnostics: BTreeMap<String, serde_json::Value>,
}

impl CheckReport {
    /// Starts an empty report; call [`CheckReport::finish`] when done.
    pub fn new(
        suite_id: impl Into<String>,
        paper_anchor: impl Into<String>,
        dimension: usize,
    ) -> CheckReport {
        CheckReport {
            suite_id: suite_id.into(),
            paper_anchor: paper_anchor.into(),
            dimension,
            cases: Vec::new(),
            overall_pass: true,
            runtime_ms: 0,
            diagnostics: BTreeMap::new(),
        }
    }

    /// Appends a case, folding its verdict into `overall_pass`.
    pub fn push_case(&mut self, case: CaseResult) {
        self.overall_pass &= case.pass;
        self.cases.push(case);
    }

    /// Appends many cases in order.
    pub fn extend_cases(&mut self, cases: impl IntoIterator<Item = CaseResult>) {
        for case in cases {
            self.push_case(case);
        }
    }

    /// Records a diagnostic entry.
    pub fn diag(&mut self, key: impl Into<String>, value: impl Serialize) {
        self.diagnostics.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
        );
    }

    /// Stamps the runtime from the suite's start instant.
    pub fn finish(mut self, started: Instant) -> CheckReport {
        self.runtime_ms = started.elapsed().as_millis() as u64;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_pass_is_conjunction_and_abs_err_exact() {
        let mut report = CheckReport::new("demo", "demo identity", 1);
        report.push_case(CaseResult::new("a", "x=1", 1.0, 1.0 + 1e-9, 1e-8));
        assert!(report.overall_pass);
        let failing = CaseResult::new("b", "x=2", 2.0, 3.0, 1e-8);
        assert_eq!(failing.abs_err, 1.0);
        report.push_case(failing);
        assert!(!report.overall_pass);
        report.push_case(CaseResult::new("c", "x=3", 5.0, 5.0, 0.0));
        assert!(!report.overall_pass, "one failure poisons the suite");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut report = CheckReport::new("demo", "demo identity", 2);
        report.push_case(CaseResult::new("a", "x=0.1", 0.1 + 0.2, 0.3, 1e-12));
        report.push_case(CaseResult::errored("b", "x=1", "quadrature budget exhausted"));
        report.diag("zero_mode", "corrected");
        report.diag("budget", 1e-10);
        let report = report.finish(Instant::now());

        let text = serde_json::to_string(&report).unwrap();
        let back: CheckReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
