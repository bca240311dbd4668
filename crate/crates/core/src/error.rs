use thiserror::Error;

/// Errors raised by the library. Validation failures carry the offending
/// 1-based point indices so that callers can point at the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lattice dimension mismatch: {left} vs {right} blown-up points")]
    DimensionMismatch { left: usize, right: usize },

    #[error("points q{0} and q{1} lie on the same fiber (collinear with q0)")]
    SameFiber(usize, usize),

    #[error("more than one point lies on the (-1)-section: indices {0:?}")]
    TwoOnSection(Vec<usize>),

    #[error("infinitely-near point {0} is not a depth-1 point over q0")]
    DepthTooDeep(usize),

    #[error("point {0} coincides with q0")]
    PointAtBase(usize),

    #[error("number of blown-up points {0} outside 0..=11")]
    MuOutOfRange(usize),

    #[error("unsupported genus {0}: this operation requires genus 2")]
    UnsupportedGenus(i64),

    #[error("unsupported condition: {0}")]
    UnsupportedCondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid elementary transformation center {0}")]
    InvalidCenter(usize),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
