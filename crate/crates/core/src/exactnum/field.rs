use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::RatPoly;
use super::ExactError;
use crate::subdivision::{BetaContext, Ctx};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn overlaps(&self, other: &RationalInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn mul(&self, other: &RationalInterval) -> RationalInterval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().cloned().unwrap();
        let hi = cands.iter().max().cloned().unwrap();
        RationalInterval { lo, hi }
    }
}

/// An element of `Q(β)`, kept as a rational polynomial in `β` reduced modulo
/// the context's subdivision polynomial.
///
/// Equality and ordering are decided on the real value at `β`, so two
/// representatives that differ by a multiple of a factor vanishing at `β`
/// still compare equal when the subdivision polynomial is reducible.
#[derive(Clone)]
pub struct FieldElem {
    ctx: Ctx,
    value: RatPoly,
}

impl FieldElem {
    pub fn from_poly(ctx: &Ctx, p: RatPoly) -> Self {
        FieldElem {
            ctx: ctx.clone(),
            value: p.rem(ctx.poly_rat()),
        }
    }

    /// From power-basis coordinates `c_0 + c_1 β + ...`.
    pub fn from_coeffs(ctx: &Ctx, coeffs: Vec<BigRational>) -> Self {
        Self::from_poly(ctx, RatPoly::new(coeffs))
    }

    pub fn from_rational(ctx: &Ctx, r: BigRational) -> Self {
        Self::from_poly(ctx, RatPoly::constant(r))
    }

    pub fn from_int(ctx: &Ctx, n: i64) -> Self {
        Self::from_rational(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero(ctx: &Ctx) -> Self {
        FieldElem {
            ctx: ctx.clone(),
            value: RatPoly::zero(),
        }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn beta(ctx: &Ctx) -> Self {
        Self::from_poly(ctx, RatPoly::monomial(1, BigRational::one()))
    }

    /// `β^k` for any integer `k`; negative powers use
    /// `β^{-1} = a_n β^{n-1} + ... + a_1`.
    pub fn beta_pow(ctx: &Ctx, k: i64) -> Self {
        let base = if k >= 0 {
            Self::beta(ctx)
        } else {
            let inv: Vec<BigRational> = ctx
                .poly()
                .coeffs()
                .iter()
                .map(|a| BigRational::from_integer(BigInt::from(a.clone())))
                .collect();
            Self::from_coeffs(ctx, inv)
        };
        base.pow_unsigned(k.unsigned_abs())
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn as_poly(&self) -> &RatPoly {
        &self.value
    }

    /// Power-basis coordinates, padded to the context degree.
    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.ctx.degree()).map(|k| self.value.coeff(k)).collect()
    }

    /// The value as a rational when the representative is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.value.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.value.coeff(0)),
            _ => self.ctx.root().rational().map(|r| self.value.eval(r)),
        }
    }

    pub fn same_context(&self, other: &FieldElem) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.poly() == other.ctx.poly()
    }

    fn check(&self, other: &FieldElem) -> Result<(), ExactError> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(ExactError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem, ExactError> {
        self.check(other)?;
        Ok(FieldElem {
            ctx: self.ctx.clone(),
            value: &self.value + &other.value,
        })
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem, ExactError> {
        self.check(other)?;
        Ok(FieldElem {
            ctx: self.ctx.clone(),
            value: &self.value - &other.value,
        })
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem, ExactError> {
        self.check(other)?;
        Ok(Self::from_poly(&self.ctx, &self.value * &other.value))
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem, ExactError> {
        self.check(other)?;
        let inv = other.inverse()?;
        Ok(Self::from_poly(&self.ctx, &self.value * &inv.value))
    }

    /// Multiplicative inverse at `β`.
    ///
    /// Factors shared with the modulus that do not vanish at `β` are split
    /// off first, so this also works when the subdivision polynomial is
    /// reducible.
    pub fn inverse(&self) -> Result<FieldElem, ExactError> {
        let root = self.ctx.root();
        let mut modulus = self.ctx.poly_rat().clone();
        loop {
            let g = self.value.gcd(&modulus);
            if g.degree() == Some(0) {
                break;
            }
            if g.is_zero() || root.sign_of(&g) == Ordering::Equal {
                return Err(ExactError::DivisionByZero);
            }
            modulus = modulus.div_rem(&g).0;
        }
        let (_, s, _) = self.value.xgcd(&modulus);
        Ok(Self::from_poly(&self.ctx, s))
    }

    fn pow_unsigned(&self, mut e: u64) -> FieldElem {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, k: i64) -> Result<FieldElem, ExactError> {
        if k >= 0 {
            Ok(self.pow_unsigned(k as u64))
        } else {
            Ok(self.inverse()?.pow_unsigned(k.unsigned_abs()))
        }
    }

    /// Sign of the real number this element denotes.
    pub fn sign(&self) -> Ordering {
        self.ctx.root().sign_of(&self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    /// Exact comparison of real values; `None` across contexts.
    pub fn compare(&self, other: &FieldElem) -> Option<Ordering> {
        if !self.same_context(other) {
            return None;
        }
        if self.value == other.value {
            return Some(Ordering::Equal);
        }
        Some(self.ctx.root().sign_of(&(&self.value - &other.value)))
    }

    /// Rational interval of width at most `width` containing the value.
    pub fn approx(&self, width: &BigRational) -> RationalInterval {
        let (lo, hi) = self.ctx.root().enclose(&self.value, width);
        RationalInterval { lo, hi }
    }

    /// Floating-point value for display only.
    pub fn to_f64(&self) -> f64 {
        let w = BigRational::new(BigInt::one(), BigInt::from(1u64 << 60));
        let iv = self.approx(&w);
        ((iv.lo + iv.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Image under `β ↦ γ^k`, where `target` is the context of `P(x^k)` and
    /// `γ` its root (so `γ^k = β`).
    pub fn embed_power(&self, target: &Ctx, k: usize) -> Result<FieldElem, ExactError> {
        if k == 0 || self.ctx.poly_rat().compose_power(k) != *target.poly_rat() {
            return Err(ExactError::ContextMismatch);
        }
        Ok(Self::from_poly(target, self.value.compose_power(k)))
    }

    /// Whether every power-basis coordinate is an integer.
    pub fn has_integer_coords(&self) -> bool {
        self.value.coeffs().iter().all(|c| c.is_integer())
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Some(Ordering::Equal)
    }
}

impl Eq for FieldElem {}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other)
    }
}

fn expect_same(a: &FieldElem, b: &FieldElem) {
    assert!(a.same_context(b), "field elements from different contexts");
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        expect_same(self, rhs);
        FieldElem {
            ctx: self.ctx.clone(),
            value: &self.value + &rhs.value,
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        expect_same(self, rhs);
        FieldElem {
            ctx: self.ctx.clone(),
            value: &self.value - &rhs.value,
        }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        expect_same(self, rhs);
        FieldElem::from_poly(&self.ctx, &self.value * &rhs.value)
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            ctx: self.ctx.clone(),
            value: -&self.value,
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem[{}]({})", self.ctx.poly(), self)
    }
}

/// Prints as a polynomial in `b` (the context root), e.g. `2-3b+b^2`.
impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.value.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match k {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coeff}")?;
                    }
                    if k == 1 {
                        write!(f, "b")?;
                    } else {
                        write!(f, "b^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl BetaContext {
    /// Shorthand used by tests and examples; see [`FieldElem::from_coeffs`].
    pub fn elem_from_ints(ctx: &Ctx, coeffs: &[i64]) -> FieldElem {
        FieldElem::from_coeffs(
            ctx,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }
}
