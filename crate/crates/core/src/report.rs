//! Outcome of evaluating one inequality on one instance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Default leading constant of the `C·(log p)³` envelopes.
pub const DEFAULT_ENVELOPE_CONSTANT: f64 = 1024.0;

/// Base-2 logarithm; every `log` in the bound formulas is base 2.
pub fn log2(x: f64) -> f64 {
    x.log2()
}

/// `c · (log p)³`.
pub fn envelope_log_cubed(c: f64, p: u64) -> f64 {
    c * log2(p as f64).powi(3)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhsTerm {
    pub name: String,
    pub value: f64,
}

impl RhsTerm {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        RhsTerm {
            name: name.into(),
            value,
        }
    }
}

/// Comparison of `lhs - main_term` against `envelope · rhs`.
///
/// Reports built with [`BoundReport::exact`] carry an exact verdict decided
/// in integer arithmetic; the float fields are then informational.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub lhs_exact: Option<BigInt>,
    pub main_term: f64,
    pub main_term_exact: Option<BigRational>,
    pub rhs_terms: Vec<RhsTerm>,
    pub rhs: f64,
    pub envelope: f64,
    pub passed: bool,
    /// Whether a failure of this report is a hard error (as opposed to a
    /// ratio that is only recorded).
    pub asserted: bool,
    pub exponent: Option<f64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    /// Float comparison `lhs - main_term <= envelope · rhs` (with `1e-9`
    /// relative slack for rounding noise in the right-hand side).
    pub fn new(
        name: impl Into<String>,
        lhs: f64,
        main_term: f64,
        rhs_terms: Vec<RhsTerm>,
        rhs: f64,
        envelope: f64,
    ) -> Self {
        let bound = envelope * rhs;
        let passed = lhs - main_term <= bound + 1e-9 * bound.abs().max(1.0);
        BoundReport {
            name: name.into(),
            lhs,
            lhs_exact: None,
            main_term,
            main_term_exact: None,
            rhs_terms,
            rhs,
            envelope,
            passed,
            asserted: true,
            exponent: None,
            notes: Vec::new(),
        }
    }

    /// Exact integer comparison `lhs <= rhs` with no main term.
    pub fn exact(
        name: impl Into<String>,
        lhs: BigInt,
        rhs: BigInt,
        rhs_terms: Vec<RhsTerm>,
    ) -> Self {
        let passed = lhs <= rhs;
        BoundReport {
            name: name.into(),
            lhs: lhs.to_f64().unwrap_or(f64::INFINITY),
            lhs_exact: Some(lhs),
            main_term: 0.0,
            main_term_exact: None,
            rhs_terms,
            rhs: rhs.to_f64().unwrap_or(f64::INFINITY),
            envelope: 1.0,
            passed,
            asserted: true,
            exponent: None,
            notes: Vec::new(),
        }
    }

    pub fn with_lhs_exact(mut self, lhs: BigInt) -> Self {
        self.lhs_exact = Some(lhs);
        self
    }

    pub fn with_main_exact(mut self, main: BigRational) -> Self {
        self.main_term_exact = Some(main);
        self
    }

    /// Replaces the envelope and re-decides a float comparison.
    pub fn with_envelope(mut self, envelope: f64) -> Self {
        let bound = envelope * self.rhs;
        self.envelope = envelope;
        self.passed = self.deviation() <= bound + 1e-9 * bound.abs().max(1.0);
        self
    }

    pub fn with_exponent(mut self, e: f64) -> Self {
        self.exponent = Some(e);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Downgrades the report to an informational one.
    pub fn reporting_only(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn deviation(&self) -> f64 {
        self.lhs - self.main_term
    }

    /// `(lhs - main_term) / rhs`, the quantity archived by the sweeps.
    pub fn ratio(&self) -> f64 {
        self.deviation() / self.rhs
    }

    /// True unless the report is asserted and failed.
    pub fn ok(&self) -> bool {
        self.passed || !self.asserted
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.rhs_terms
            .iter()
            .find(|t| t.name == name)
            .map(|t| t.value)
    }
}
