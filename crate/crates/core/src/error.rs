//! Crate-wide error type.

/// Errors raised by constructors and operations with hard preconditions.
///
/// Checks whose outcome is a matter of degree return a
/// [`Verdict`](crate::definiteness::Verdict) or a report instead; `Error` is
/// reserved for inputs that are structurally unusable (shape mismatches,
/// invalid group tables, failed domain hypotheses).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("descriptor mismatch: {left:?} vs {right:?}")]
    DescriptorMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("{op}: required condition failed: {condition} (residual {residual:e})")]
    Domain {
        op: &'static str,
        condition: String,
        residual: f64,
    },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid state weights: {0}")]
    InvalidState(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn domain<T: crate::Real>(op: &'static str, condition: impl Into<String>, residual: T) -> Self {
        Error::Domain {
            op,
            condition: condition.into(),
            residual: residual.to_f64().unwrap_or(f64::NAN),
        }
    }
}
