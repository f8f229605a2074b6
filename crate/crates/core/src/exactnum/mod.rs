//! Exact rational and polynomial arithmetic, real-root isolation and the
//! number-field elements every other module computes with.
//!
//! Nothing here uses floating point except [`FieldElem::to_f64`], which exists
//! for display.

mod field;
mod poly;
mod sturm;

use num_rational::BigRational;
use thiserror::Error;

pub use field::{FieldElem, RationalInterval};
pub use poly::RatPoly;
pub use sturm::{
    count_roots_open, isolate_positive_root, sturm_count, sturm_sequence, AlgebraicRoot,
    RootInterval,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero polynomial has no Sturm count")]
    ZeroPolynomial,
    #[error("interval is empty")]
    EmptyInterval,
    #[error("polynomial vanishes at interval endpoint {0}")]
    EndpointIsRoot(BigRational),
    #[error("expected exactly one root in (0, 1), found {0}")]
    NotIsolated(usize),
    #[error("field elements belong to different contexts")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
}
