//! Small named-check reports shared by validators and verification
//! routines.

use serde::Serialize;

/// One named check with its residual.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine<T> {
    pub name: String,
    pub passed: bool,
    /// Magnitude of the worst violation observed (0 for exact checks).
    pub residual: T,
    /// Optional context: which element, summand, or parameter attained the
    /// residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Ordered list of named checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport<T> {
    pub lines: Vec<CheckLine<T>>,
}

impl<T: crate::Real> CheckReport<T> {
    pub fn new() -> Self {
        CheckReport { lines: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, residual: T) {
        self.lines.push(CheckLine {
            name: name.into(),
            passed,
            residual,
            detail: None,
        });
    }

    pub fn push_detailed(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        residual: T,
        detail: impl Into<String>,
    ) {
        self.lines.push(CheckLine {
            name: name.into(),
            passed,
            residual,
            detail: Some(detail.into()),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn worst_residual(&self) -> T {
        self.lines
            .iter()
            .map(|l| l.residual)
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn merge(&mut self, prefix: &str, other: CheckReport<T>) {
        for mut line in other.lines {
            line.name = format!("{prefix}.{}", line.name);
            self.lines.push(line);
        }
    }
}
