use std::fmt;
use std::sync::OnceLock;

use super::{from_partition_pair, Partition, PartitionPair, PlError, PlMap};
use crate::exactnum::FieldElem;
use crate::subdivision::{validate_subdivision_u64, Ctx};

/// The context of `x^2 + x - 1`, root `τ`.
pub fn tau_context() -> Ctx {
    static TAU: OnceLock<Ctx> = OnceLock::new();
    TAU.get_or_init(|| validate_subdivision_u64(&[1, 1]).expect("valid")).clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    X,
    Y,
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenKind::X => "x",
            GenKind::Y => "y",
        })
    }
}

/// `x_i` or `y_i`: the identity on `[0, 1 - τ^i]`, then `x_i` has slopes
/// `τ^-2, 1, τ` and `y_i` has slopes `τ^-1, τ`.
pub fn ftau_generator(kind: GenKind, i: u32) -> PlMap {
    let ctx = tau_context();
    let t = |k: u32| FieldElem::beta_pow(&ctx, k as i64);
    let one = FieldElem::one(&ctx);
    let u = &one - &t(i);
    let mut v = vec![(FieldElem::zero(&ctx), FieldElem::zero(&ctx))];
    if i > 0 {
        v.push((u.clone(), u.clone()));
    }
    if kind == GenKind::X {
        v.push((&u + &t(i + 4), &u + &t(i + 2)));
    }
    v.push((&one - &t(i + 1), &one - &t(i + 2)));
    v.push((one.clone(), one));
    PlMap::new(&ctx, v).expect("generator vertices increase")
}

/// A cell of the subdivided interval `[0, √β]` or its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    /// Length `β^2 √β`.
    Short,
    /// Length `β √β`.
    Long,
    /// The complement `[√β, 1]`, length `1 - √β`.
    Rest,
}

/// Orderings of the cells for domain and codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub domain: Vec<Cell>,
    pub codomain: Vec<Cell>,
}

impl Arrangement {
    /// Longs then shorts against shorts then longs, with the complement last.
    pub fn standard(a: u64, b: u64) -> Arrangement {
        let mut domain = vec![Cell::Long; b as usize];
        domain.extend(std::iter::repeat_n(Cell::Short, a as usize));
        domain.push(Cell::Rest);
        let mut codomain = vec![Cell::Short; a as usize];
        codomain.extend(std::iter::repeat_n(Cell::Long, b as usize));
        codomain.push(Cell::Rest);
        Arrangement { domain, codomain }
    }

    fn validate(&self, a: u64, b: u64) -> Result<(), PlError> {
        let bad = |m: &str| Err(PlError::InvalidArrangement(m.to_string()));
        for side in [&self.domain, &self.codomain] {
            let count = |c: Cell| side.iter().filter(|&&x| x == c).count() as u64;
            if count(Cell::Short) != a || count(Cell::Long) != b || count(Cell::Rest) != 1 {
                return bad("each ordering needs a short cells, b long cells and one complement cell");
            }
        }
        let rest = |s: &[Cell]| s.iter().position(|&c| c == Cell::Rest);
        if rest(&self.domain) != rest(&self.codomain) {
            return bad("the complement cell must sit at the same index in both orderings");
        }
        if self.domain == self.codomain {
            return bad("the two orderings must differ");
        }
        Ok(())
    }
}

/// The context of `ax^4 + bx^2 - 1`, whose root `γ` is `√β` for the root
/// `β` of `ax^2 + bx - 1`.
pub fn sqrt_context(a: u64, b: u64) -> Result<Ctx, PlError> {
    if a == 0 {
        return Err(PlError::InvalidArrangement("the quadratic needs a >= 1".into()));
    }
    validate_subdivision_u64(&[0, b, 0, a]).map_err(|e| PlError::InvalidArrangement(e.to_string()))
}

/// The map sending the domain cells of `arr` onto its codomain cells, in the
/// context of `ax^4 + bx^2 - 1`. Uses `a γ^5 + b γ^3 = γ`.
pub fn counterexample_map(a: u64, b: u64, arr: &Arrangement) -> Result<PlMap, PlError> {
    arr.validate(a, b)?;
    let ctx = sqrt_context(a, b)?;
    let len = |c: &Cell| match c {
        Cell::Short => FieldElem::beta_pow(&ctx, 5),
        Cell::Long => FieldElem::beta_pow(&ctx, 3),
        Cell::Rest => &FieldElem::one(&ctx) - &FieldElem::beta(&ctx),
    };
    let side = |cells: &[Cell]| {
        let lengths: Vec<FieldElem> = cells.iter().map(len).collect();
        Partition::from_lengths(&ctx, &lengths)
    };
    let pp = PartitionPair::new(side(&arr.domain)?, side(&arr.codomain)?)?;
    Ok(from_partition_pair(&pp))
}
