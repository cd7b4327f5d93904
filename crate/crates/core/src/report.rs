//! Serializable verification reports.
//!
//! Every verification routine returns a [`CheckReport`]; mathematical failures
//! never become `Err`. Exact residuals travel as `[numerator, denominator]`
//! decimal strings.

use serde::Serialize;

use crate::rational::{to_pair, Rational};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub case: String,
    pub detail: String,
    /// Offending exact values, if any.
    pub values: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Free-form notes (conventions applied, logged central terms, ...).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            passed: true,
            cases: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn case_ok(&mut self) {
        self.cases += 1;
    }

    pub fn fail(
        &mut self,
        case: impl Into<String>,
        detail: impl Into<String>,
        values: &[Rational],
    ) {
        self.cases += 1;
        self.passed = false;
        self.failures.push(Failure {
            case: case.into(),
            detail: detail.into(),
            values: values.iter().map(to_pair).collect(),
        });
    }

    /// Records one case, failing it unless `ok`.
    pub fn expect(
        &mut self,
        ok: bool,
        case: impl FnOnce() -> String,
        detail: &str,
        values: &[Rational],
    ) {
        if ok {
            self.case_ok();
        } else {
            self.fail(case(), detail, values);
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Folds another report's cases and failures into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.passed &= other.passed;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }
}

/// One floating-point identity residual with the magnitude it is judged against.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NumericResidual {
    pub identity: String,
    pub residual: f64,
    pub scale: f64,
    /// Quadrature error estimate accumulated over the terms.
    pub error_estimate: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NumericReport {
    pub check: String,
    pub passed: bool,
    pub relative_tolerance: f64,
    pub residuals: Vec<NumericResidual>,
}

impl NumericReport {
    pub fn new(check: impl Into<String>, relative_tolerance: f64) -> Self {
        NumericReport {
            check: check.into(),
            passed: true,
            relative_tolerance,
            residuals: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        identity: impl Into<String>,
        residual: f64,
        scale: f64,
        error_estimate: f64,
    ) {
        // Terms that cancel exactly leave only quadrature noise.
        let passed = residual.is_finite()
            && (residual <= self.relative_tolerance * scale || residual <= error_estimate);
        self.passed &= passed;
        self.residuals.push(NumericResidual {
            identity: identity.into(),
            residual,
            scale,
            error_estimate,
            passed,
        });
    }
}
