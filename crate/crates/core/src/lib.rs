//! Exact decision procedures for Frobenius extensions of finite-dimensional coalgebras
//! over the rationals and prime fields.

pub mod algebra;
pub mod cli;
pub mod coalgebra;
pub mod comodule;
pub mod cotensor;
pub mod document;
pub mod error;
pub mod family;
pub mod field;
pub mod frobenius;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod report;
pub mod zoo;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::Matrix;
