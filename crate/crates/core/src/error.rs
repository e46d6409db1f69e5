use thiserror::Error;

use crate::series::QuarterIndex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quarter token `{0}` (expected YYYYQn, e.g. 1991Q1)")]
    BadQuarter(String),
    #[error("series is empty")]
    EmptySeries,
    #[error("gap at {0}")]
    Gap(QuarterIndex),
    #[error("duplicate or out-of-order quarter at {0}")]
    Duplicate(QuarterIndex),
    #[error("non-finite value at {0}")]
    NonFinite(QuarterIndex),
    #[error("non-positive value at {0}; log transform undefined")]
    NonPositive(QuarterIndex),
    #[error("zero variance")]
    ZeroVariance,
    #[error("sample too short: need {needed} observations, have {have}")]
    TooShort { needed: usize, have: usize },
    #[error("sample bounds {from}..{to} outside the data range {first}..{last}")]
    OutOfRange {
        from: QuarterIndex,
        to: QuarterIndex,
        first: QuarterIndex,
        last: QuarterIndex,
    },
    #[error("insufficient overlap at shift p = {p}: {have} aligned observations (need 3)")]
    InsufficientOverlap { p: i64, have: usize },
    #[error("series do not overlap in time")]
    Misaligned,
    #[error("duplicate regressor column `{0}`")]
    DuplicateColumn(String),
    #[error("design has {rows} rows but {cols} columns; need more observations than coefficients")]
    Underdetermined { rows: usize, cols: usize },
    #[error("rank-deficient design: column `{0}` is linearly dependent on the others")]
    RankDeficient(String),
    #[error("exact fit (zero residual variance){}", .context.as_deref().map(|c| format!(" {c}")).unwrap_or_default())]
    ExactFit { context: Option<String> },
    #[error("models are not nested on the same sample: {0}")]
    NotNested(String),
    #[error("invalid degrees of freedom: {0}")]
    InvalidDf(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("critical value not tabulated for {0}")]
    NotTabulated(String),
    #[error("break date {date} leaves a sub-sample shorter than {needed} observations")]
    BreakNearEdge { date: QuarterIndex, needed: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("forecast origin mismatch: {0}")]
    OriginMismatch(String),
    #[error("singular matrix: {0}")]
    Singular(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
