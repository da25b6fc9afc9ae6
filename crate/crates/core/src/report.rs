//! Verification reports: named identities with a pass/fail flag and, on
//! failure, the first differing matrix entry.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactla::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at ({}, {}): {} != {}", self.row, self.col, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<Entry>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `lhs == rhs`; a shape difference counts as a failure with the
    /// shapes in the witness.
    pub fn check(&mut self, name: impl Into<String>, lhs: &Matrix, rhs: &Matrix) -> bool {
        let witness = lhs.first_difference(rhs);
        let pass = witness.is_none();
        self.entries.push(Entry { name: name.into(), pass, witness, note: None });
        pass
    }

    pub fn flag(&mut self, name: impl Into<String>, pass: bool, note: Option<String>) -> bool {
        self.entries.push(Entry { name: name.into(), pass, witness: None, note });
        pass
    }

    pub fn push_failure(&mut self, name: impl Into<String>, witness: Option<Witness>, note: impl Into<String>) {
        self.entries.push(Entry { name: name.into(), pass: false, witness, note: Some(note.into()) });
    }

    pub fn extend(&mut self, prefix: &str, other: VerificationReport) {
        for mut e in other.entries {
            if !prefix.is_empty() {
                e.name = format!("{prefix}.{}", e.name);
            }
            self.entries.push(e);
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// True when every entry whose name starts with `prefix` passed and at
    /// least one such entry exists.
    pub fn passed_prefix(&self, prefix: &str) -> bool {
        let mut any = false;
        for e in self.entries.iter().filter(|e| e.name.starts_with(prefix)) {
            any = true;
            if !e.pass {
                return false;
            }
        }
        any
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{} {}", if e.pass { "PASS" } else { "FAIL" }, e.name)?;
            if let Some(w) = &e.witness {
                write!(f, " {w}")?;
            }
            if let Some(n) = &e.note {
                write!(f, " ({n})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
