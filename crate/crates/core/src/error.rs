use std::fmt;

use thiserror::Error;

/// Which of the two existence/uniqueness rank conditions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankCondition {
    /// `rank(C) = p`
    ConstraintRows,
    /// `rank([A; C]) = n`
    StackedColumns,
}

impl fmt::Display for RankCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankCondition::ConstraintRows => write!(f, "rank(C) = p"),
            RankCondition::StackedColumns => write!(f, "rank([A; C]) = n"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LseError {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("non-finite entry at position {index} in {what}")]
    NonFinite { what: &'static str, index: usize },

    #[error("rank condition {condition} violated: pivot {index} has magnitude {magnitude:e} below tolerance {tolerance:e}")]
    RankDeficient {
        condition: RankCondition,
        index: usize,
        magnitude: f64,
        tolerance: f64,
    },

    #[error("singular triangular matrix: |T[{index},{index}]| = {magnitude:e} below tolerance {tolerance:e}")]
    SingularTriangular {
        index: usize,
        magnitude: f64,
        tolerance: f64,
    },

    #[error("singular matrix encountered in {op}")]
    Singular { op: &'static str },

    #[error("selected solution L*x is zero; relative measure is undefined")]
    ZeroSelection,

    #[error("undefined ratio: {0}")]
    UndefinedRatio(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("problem too large for dense evaluation in {op}: {size} exceeds {limit}")]
    TooLarge {
        op: &'static str,
        size: usize,
        limit: usize,
    },
}

impl LseError {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        LseError::Dimension {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, LseError>;
