//! Named pass/fail check lists returned by every verifier.

use std::fmt;

use serde::Serialize;

use crate::exactq::QScalar;
use crate::linalg::{QMatrix, QVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Observations that are not pass/fail conditions.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, true, "");
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Records whether two matrices agree, locating the first differing
    /// entry on failure.
    pub fn matrices_equal(
        &mut self,
        name: impl Into<String>,
        lhs: &QMatrix,
        rhs: &QMatrix,
    ) -> bool {
        let name = name.into();
        match lhs.first_difference(rhs) {
            None => {
                self.pass(name);
                true
            }
            Some((r, c, a, b)) => {
                self.push(name, false, format!("entry ({}, {}): {} vs {}", r, c, a, b));
                false
            }
        }
    }

    pub fn vectors_equal(&mut self, name: impl Into<String>, lhs: &QVector, rhs: &QVector) -> bool {
        let name = name.into();
        let diff = lhs.sub(rhs);
        match diff.first_nonzero() {
            None => {
                self.pass(name);
                true
            }
            Some((i, _)) => {
                self.push(
                    name,
                    false,
                    format!("coordinate {}: {} vs {}", i, lhs.get(i), rhs.get(i)),
                );
                false
            }
        }
    }

    pub fn scalars_equal(&mut self, name: impl Into<String>, lhs: &QScalar, rhs: &QScalar) -> bool {
        let name = name.into();
        if lhs == rhs {
            self.pass(name);
            true
        } else {
            self.push(name, false, format!("{} vs {}", lhs, rhs));
            false
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    /// Merges with every check name prefixed.
    pub fn merge_prefixed(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{}: {}", prefix, c.name);
            self.checks.push(c);
        }
        for n in other.notes {
            self.notes.push(format!("{}: {}", prefix, n));
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn passed_named(&self, name: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "PASS {}", c.name)?;
            } else {
                writeln!(f, "FAIL {}: {}", c.name, c.detail)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "NOTE {}", n)?;
        }
        Ok(())
    }
}
