//! Exact PL homeomorphisms of `[0, 1]` with coordinates in `Q(β)`.
//!
//! Composition reads left to right: `(f * g)(t) = g(f(t))`.

mod generators;
mod map;
mod membership;

use thiserror::Error;

pub use generators::{
    counterexample_map, ftau_generator, sqrt_context, tau_context, Arrangement, Cell, GenKind,
};
pub use map::{from_partition_pair, Fraction, Partition, PartitionPair, PlMap};
pub use membership::{
    slope_exponents, validate_membership, BreakpointCheck, MembershipReport, SlopeCheck, SubringOracle,
    SLOPE_WINDOW,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("points must start at 0 and end at 1")]
    BadEndpoints,
    #[error("point {index} does not exceed its predecessor")]
    NotIncreasing { index: usize },
    #[error("domain has {domain} cells but codomain has {codomain}")]
    LengthMismatch { domain: usize, codomain: usize },
    #[error("values belong to different contexts")]
    ContextMismatch,
    #[error("point lies outside [0, 1]")]
    OutOfDomain,
    #[error("unsupported subring: {0}")]
    UnsupportedSubring(String),
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
}
