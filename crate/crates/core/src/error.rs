use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} is below the minimum {min}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("duplicate point {0:?}")]
    DuplicatePoint(Vec<i64>),

    #[error("coordinate index {index} out of range for dimension {dim}")]
    AxisOutOfRange { index: usize, dim: usize },

    #[error("point {point:?} lies outside the box [0,{side})^n")]
    OutOfBox { point: Vec<i64>, side: i64 },

    #[error("not a weak antichain: {lower:?} << {upper:?} ({leftover} points left after the greedy split)")]
    NotWeakAntichain {
        lower: Vec<i64>,
        upper: Vec<i64>,
        leftover: usize,
    },

    #[error("point {point:?} does not attain its minimum coordinate at index {axis}")]
    NotMinimalCoordinate { point: Vec<i64>, axis: usize },

    #[error("budget exceeded: {required} > {budget}; {hint}")]
    BudgetExceeded {
        required: u128,
        budget: u128,
        hint: &'static str,
    },

    #[error("target size {target} not reached after {attempts} attempts")]
    TargetUnreachable { target: usize, attempts: usize },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid surface: {0}")]
    InvalidSurface(String),
}
