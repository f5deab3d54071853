//! Validation reports shared by every axiom checker.

use std::fmt;

use serde::Serialize;

/// The identity that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Coassociativity,
    LeftCounit,
    RightCounit,
    Comultiplicativity,
    CounitPreservation,
    CoactionCoassociativity,
    CoactionCounit,
    BicomoduleCompatibility,
    Associativity,
    LeftUnit,
    RightUnit,
    Multiplicativity,
    UnitPreservation,
    ActionAssociativity,
    ActionUnit,
    BimoduleCompatibility,
    Balance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: Law,
    /// Basis element (or first basis element of a pair) where the identity fails.
    pub basis_index: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn pass() -> Self {
        Report::default()
    }

    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: Law, basis_index: usize) {
        self.violations.push(Violation { law, basis_index });
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn has(&self, law: Law, basis_index: usize) -> bool {
        self.violations
            .iter()
            .any(|v| v.law == law && v.basis_index == basis_index)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return write!(f, "pass");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{:?} at basis index {}", v.law, v.basis_index))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}
