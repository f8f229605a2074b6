//! Fixtures shared by the benchmarks.

use betaforge_core::subdivision::{validate_subdivision_u64, Ctx};

pub fn golden() -> Ctx {
    validate_subdivision_u64(&[1, 1]).expect("valid")
}

pub fn quartic() -> Ctx {
    validate_subdivision_u64(&[0, 1, 0, 1]).expect("valid")
}
