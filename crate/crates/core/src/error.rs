use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("index {0} appears more than once in an index set")]
    DuplicateIndex(usize),

    /// A column of `A` without entries makes `AᵀA` singular.
    #[error("column {0} of A has no nonzero entries; the normal equations matrix would be singular")]
    ZeroColumn(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("Cholesky factorization broke down at pivot {pivot} (value {value:e}){}", block_suffix(*.block))]
    Factorization {
        block: Option<usize>,
        pivot: usize,
        value: f64,
    },

    #[error("generalized eigensolver failed{}: {reason}", block_suffix(*.subdomain))]
    Eigensolver {
        subdomain: Option<usize>,
        reason: String,
    },

    #[error("coarse operator factorization failed; offending basis columns {columns:?}")]
    CoarseFactorization { columns: Vec<usize> },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn block_suffix(block: Option<usize>) -> String {
    match block {
        Some(b) => format!(" in subdomain {b}"),
        None => String::new(),
    }
}

impl Error {
    /// Attaches a subdomain id to a factorization or eigensolver failure.
    pub fn in_block(self, id: usize) -> Self {
        match self {
            Error::Factorization { pivot, value, .. } => Error::Factorization {
                block: Some(id),
                pivot,
                value,
            },
            Error::Eigensolver { reason, .. } => Error::Eigensolver {
                subdomain: Some(id),
                reason,
            },
            other => other,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
