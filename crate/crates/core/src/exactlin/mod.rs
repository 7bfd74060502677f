//! Exact linear algebra over ℚ and ℚ(i): the arithmetic substrate for
//! every certificate produced by this crate. Floating-point linear algebra
//! lives in [`crate::tomo`] and is never used for rank decisions.

mod matrix;
mod scalar;

pub use matrix::{rank_of, spans, Echelon, Matrix, Vector};
pub use scalar::{
    gauss_i, gauss_int, rat, rat_int, ExactScalar, FloatScalar, GaussRational, Rational,
};

/// Errors from exact-arithmetic parsing.
#[derive(Debug, thiserror::Error)]
pub enum ExactError {
    #[error("parse error: {0}")]
    Parse(String),
}
