use thiserror::Error;

use crate::report::Report;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("coalgebra mismatch: {0}")]
    CoalgebraMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("object fails its axioms: {0}")]
    Invalid(Report),
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("not a bicomodule morphism: {0}")]
    NotAMorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error("undecided within budget (confidence {confidence})")]
    Undecided { confidence: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
