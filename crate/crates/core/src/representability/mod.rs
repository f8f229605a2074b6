//! Nonnegative representability in `Z[λ]`, `λ = 1/β`.
//!
//! An element with coordinates `p` in the basis `λ^{n-1}, ..., 1` is a
//! nonnegative combination of powers of `λ` exactly when some `A^N p` is
//! entrywise nonnegative, `A` being multiplication by `λ`. Since `A` is
//! nonnegative, the supports of `A^N p⁺` and `A^N p⁻` evolve by boolean
//! matrix products, so a cycle of support pairs that stay disjoint proves
//! that a negative entry survives for every `N`.
//!
//! Certificates are statements about the iteration `A^N p`. They transfer to
//! the field element only when `1, β, ..., β^{n-1}` are independent, that
//! is when the polynomial is irreducible.

mod certificate;
mod matrix;

use thiserror::Error;

pub use certificate::{
    decide_nonneg, decide_nonneg_with, verify_certificate, verify_certificate_with, Certificate,
    CertificateKind, ImpossibleCycle, DEFAULT_MAX_N,
};
pub use matrix::{
    apply, boolean_cycle, boolean_powers, build_matrix, matrix_power, BoolMatrix, CoeffVector,
    CycleInfo, IntMatrix, SubstitutionMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentabilityError {
    #[error("vector has length {got}, matrix dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no repeated pattern within {bound} powers")]
    NoCycle { bound: usize },
    #[error("the zero vector has no sign structure")]
    ZeroVector,
}
