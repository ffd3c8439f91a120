use thiserror::Error;

/// Errors raised by set construction, frame building and reconstruction.
#[derive(Debug, Error)]
pub enum TomographyError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("set is not complete: rank {rank} < {required}")]
    IncompleteSet { rank: usize, required: usize },

    #[error("set is not minimal: {count} projectors for an operator space of dimension {required}")]
    NotMinimal { count: usize, required: usize },

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("family member {index} is not unitary (deviation {deviation:.3e})")]
    InvalidUnitary { index: usize, deviation: f64 },

    #[error("fiducial operator has a degenerate spectrum (smallest gap {gap:.3e})")]
    DegenerateSpectrum { gap: f64 },

    #[error("truncation guard violated: {0}")]
    Truncation(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("nu = 0 has no position-representation eigenfunction; use the direct tomogram branch")]
    UseDirectBranch,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, TomographyError>;

impl From<serde_json::Error> for TomographyError {
    fn from(err: serde_json::Error) -> Self {
        TomographyError::Parse(format!("{} (line {}, column {})", err, err.line(), err.column()))
    }
}
