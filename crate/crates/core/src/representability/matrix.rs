use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::RepresentabilityError;
use crate::exactnum::FieldElem;
use crate::subdivision::Ctx;

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix { rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = BigInt::from(1);
        }
        IntMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.rows[i][j] = x;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.dim();
        assert_eq!(n, other.dim());
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell += a * &other.rows[k][j];
                }
            }
        }
        IntMatrix { rows }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.dim());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pattern(&self) -> BoolMatrix {
        BoolMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| !x.is_zero()).collect())
                .collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.rows.iter().flatten().all(|x| !x.is_negative())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Zero/nonzero pattern of a nonnegative matrix. Products of patterns are
/// patterns of products because nonnegative entries never cancel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: Vec<Vec<bool>>,
}

impl BoolMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Self {
        BoolMatrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        BoolMatrix {
            rows: (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let n = self.dim();
        BoolMatrix {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).any(|k| self.rows[i][k] && other.rows[k][j]))
                        .collect()
                })
                .collect(),
        }
    }

    /// Support of `M v` for a nonnegative `v` with support `s`.
    pub fn apply(&self, s: &[bool]) -> Vec<bool> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(s).any(|(&a, &b)| a && b))
            .collect()
    }
}

/// Integer coordinates in the descending basis `λ^{n-1}, ..., λ, 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffVector(pub Vec<BigInt>);

impl CoeffVector {
    pub fn from_i64(v: &[i64]) -> Self {
        CoeffVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// `(p⁺, p⁻)` with `p = p⁺ - p⁻`, both nonnegative.
    pub fn split(&self) -> (CoeffVector, CoeffVector) {
        let pos = self.0.iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() });
        let neg = self.0.iter().map(|x| if x.is_negative() { -x } else { BigInt::zero() });
        (CoeffVector(pos.collect()), CoeffVector(neg.collect()))
    }

    pub fn support(&self) -> Vec<bool> {
        self.0.iter().map(|x| !x.is_zero()).collect()
    }

    /// `Σ v_j λ^{n-1-j}` as an element of the context's field.
    pub fn value(&self, ctx: &Ctx) -> FieldElem {
        let n = self.dim();
        let mut acc = FieldElem::zero(ctx);
        for (j, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = FieldElem::from_rational(ctx, c.clone().into());
            let lam = FieldElem::beta_pow(ctx, -((n - 1 - j) as i64));
            acc = &acc + &(&term * &lam);
        }
        acc
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Multiplication by `λ = 1/β` in the descending power basis.
#[derive(Clone, Debug)]
pub struct SubstitutionMatrix {
    ctx: Ctx,
    matrix: IntMatrix,
}

impl SubstitutionMatrix {
    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Replace the integer matrix, keeping the context. Used to exercise
    /// failure paths.
    pub fn with_matrix(&self, matrix: IntMatrix) -> SubstitutionMatrix {
        assert_eq!(matrix.dim(), self.dim());
        SubstitutionMatrix { ctx: self.ctx.clone(), matrix }
    }
}

/// `λ · (c_{n-1} λ^{n-1} + ... + c_0)`: the top coefficient shifts into
/// `λ^n` and is rewritten by the reciprocal relation, the rest shift up.
pub fn build_matrix(ctx: &Ctx) -> SubstitutionMatrix {
    let n = ctx.degree();
    let mut m = IntMatrix::new(vec![vec![BigInt::zero(); n]; n]);
    for (i, r) in ctx.reciprocal_relation().iter().enumerate() {
        m.set(i, 0, BigInt::from(r.clone()));
    }
    for j in 0..n.saturating_sub(1) {
        m.set(j, j + 1, BigInt::from(1));
    }
    SubstitutionMatrix { ctx: ctx.clone(), matrix: m }
}

pub fn apply(a: &SubstitutionMatrix, v: &CoeffVector) -> Result<CoeffVector, RepresentabilityError> {
    if v.dim() != a.dim() {
        return Err(RepresentabilityError::DimensionMismatch { expected: a.dim(), got: v.dim() });
    }
    Ok(CoeffVector(a.matrix.mul_vec(&v.0)))
}

pub fn matrix_power(a: &SubstitutionMatrix, n: u64) -> IntMatrix {
    a.matrix.pow(n)
}

/// The pattern of `A^N` for `N >= start` repeats with `period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleInfo {
    pub start: usize,
    pub period: usize,
}

/// First repetition in the patterns of `A^0, A^1, ...`, searched up to
/// `A^max_n`. A repeat is a proof of eventual periodicity since each pattern
/// determines the next.
pub fn boolean_cycle(a: &SubstitutionMatrix, max_n: usize) -> Result<CycleInfo, RepresentabilityError> {
    let b = a.matrix.pattern();
    let mut seen: HashMap<BoolMatrix, usize> = HashMap::new();
    let mut cur = BoolMatrix::identity(a.dim());
    for n in 0..=max_n {
        if let Some(&start) = seen.get(&cur) {
            return Ok(CycleInfo { start, period: n - start });
        }
        seen.insert(cur.clone(), n);
        cur = cur.mul(&b);
    }
    Err(RepresentabilityError::NoCycle { bound: max_n })
}

/// Patterns of `A^0, ..., A^upto` by boolean powers.
pub fn boolean_powers(a: &SubstitutionMatrix, upto: usize) -> Vec<BoolMatrix> {
    let b = a.matrix.pattern();
    let mut out = Vec::with_capacity(upto + 1);
    let mut cur = BoolMatrix::identity(a.dim());
    for _ in 0..=upto {
        out.push(cur.clone());
        cur = cur.mul(&b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::validate_subdivision_u64;

    fn quartic() -> SubstitutionMatrix {
        build_matrix(&validate_subdivision_u64(&[0, 1, 0, 1]).unwrap())
    }

    #[test]
    fn golden_matrix() {
        let a = build_matrix(&validate_subdivision_u64(&[1, 1]).unwrap());
        assert_eq!(a.matrix(), &IntMatrix::from_i64(&[&[1, 1], &[1, 0]]));
        let a = build_matrix(&validate_subdivision_u64(&[2]).unwrap());
        assert_eq!(a.matrix(), &IntMatrix::from_i64(&[&[2]]));
    }

    #[test]
    fn quartic_matrix_and_product() {
        let a = quartic();
        assert_eq!(
            a.matrix(),
            &IntMatrix::from_i64(&[&[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]])
        );
        let p = CoeffVector::from_i64(&[-1, 0, 1, 1]);
        assert_eq!(apply(&a, &p).unwrap(), CoeffVector::from_i64(&[0, 0, 1, -1]));
        assert_eq!(
            matrix_power(&a, 4),
            IntMatrix::from_i64(&[&[2, 0, 1, 0], &[0, 2, 0, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]])
        );
        assert_eq!(matrix_power(&a, 0), IntMatrix::identity(4));
    }

    #[test]
    fn repeated_application_matches_power() {
        let a = quartic();
        let mut v = CoeffVector::from_i64(&[0, 0, 0, 1]);
        for _ in 0..4 {
            v = apply(&a, &v).unwrap();
        }
        let col: Vec<BigInt> = matrix_power(&a, 4).rows().iter().map(|r| r[3].clone()).collect();
        assert_eq!(v.0, col);
    }

    #[test]
    fn dimension_mismatch() {
        let a = quartic();
        assert_eq!(
            apply(&a, &CoeffVector::from_i64(&[1, 2])).unwrap_err(),
            RepresentabilityError::DimensionMismatch { expected: 4, got: 2 }
        );
    }

    #[test]
    fn cycles() {
        assert_eq!(boolean_cycle(&quartic(), 256).unwrap(), CycleInfo { start: 4, period: 2 });
        let g = build_matrix(&validate_subdivision_u64(&[1, 1]).unwrap());
        assert_eq!(boolean_cycle(&g, 256).unwrap(), CycleInfo { start: 2, period: 1 });
        let l = build_matrix(&validate_subdivision_u64(&[3]).unwrap());
        assert_eq!(boolean_cycle(&l, 256).unwrap(), CycleInfo { start: 0, period: 1 });
        assert!(boolean_cycle(&quartic(), 3).is_err());
    }

    #[test]
    fn multiplying_by_the_matrix_multiplies_by_lambda() {
        let ctx = validate_subdivision_u64(&[0, 1, 0, 1]).unwrap();
        let a = build_matrix(&ctx);
        let v = CoeffVector::from_i64(&[3, -1, 4, -1]);
        let lam = FieldElem::beta_pow(&ctx, -1);
        assert_eq!(apply(&a, &v).unwrap().value(&ctx), &lam * &v.value(&ctx));
    }
}
