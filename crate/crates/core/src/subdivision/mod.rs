//! Subdivision polynomials `a_n x^n + ... + a_1 x - 1`, the contexts built
//! from them, caret shapes, and structural questions about the polynomials.

mod carets;
mod quadratic;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{isolate_positive_root, AlgebraicRoot, RatPoly, RootInterval};

pub use carets::{enumerate_carets, multinomial, CaretShape, DEFAULT_CARET_CAP};
pub use quadratic::{
    even_root_exclusion, exponent_gcd, quadratic_tree_pair_defined, rational_root,
    sqrt_membership_quadratic, CoefficientEquation, EvenRootReport, RootMembership,
    SqrtMembershipReport,
};

/// Shared handle to a context; field elements, maps and trees keep one.
pub type Ctx = Arc<BetaContext>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubdivisionError {
    #[error("coefficient a_{index} is negative")]
    Negative { index: usize },
    #[error("all coefficients are zero")]
    AllZero,
    #[error("trivial subdivision polynomial x^{degree}-1 (its root is 1)")]
    Trivial { degree: usize },
    #[error("{count} caret shapes exceed the enumeration cap of {cap}")]
    TooManyCarets { count: BigUint, cap: usize },
    #[error("expected a quadratic ax^2+bx-1 with a >= 1, got a={a}, b={b}")]
    NotQuadratic { a: u64, b: u64 },
    #[error("the quadratic form in the constant coefficient is not positive definite")]
    Undecided,
}

/// Coefficients `a_1..a_n` of a nontrivial subdivision polynomial; the
/// constant term is always `-1` and `a_n > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubdivisionPolynomial {
    coeffs: Vec<BigUint>,
}

impl SubdivisionPolynomial {
    pub fn new(coeffs: &[BigInt]) -> Result<Self, SubdivisionError> {
        let mut out = Vec::with_capacity(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_negative() {
                return Err(SubdivisionError::Negative { index: i + 1 });
            }
            out.push(c.magnitude().clone());
        }
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        if out.is_empty() {
            return Err(SubdivisionError::AllZero);
        }
        let nonzero: Vec<_> = out.iter().filter(|c| !c.is_zero()).collect();
        if nonzero.len() == 1 && nonzero[0].is_one() {
            return Err(SubdivisionError::Trivial { degree: out.len() });
        }
        Ok(SubdivisionPolynomial { coeffs: out })
    }

    pub fn from_u64(coeffs: &[u64]) -> Result<Self, SubdivisionError> {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::new(&big)
    }

    /// `a_1..a_n`
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// `a_i` for `1 <= i <= n`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigUint {
        if i == 0 {
            return BigUint::zero();
        }
        self.coeffs.get(i - 1).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn to_ratpoly(&self) -> RatPoly {
        let mut c = vec![-BigRational::one()];
        c.extend(
            self.coeffs
                .iter()
                .map(|a| BigRational::from_integer(BigInt::from(a.clone()))),
        );
        RatPoly::new(c)
    }

    /// `P(x^k)`
    pub fn compose_power(&self, k: usize) -> SubdivisionPolynomial {
        assert!(k >= 1);
        let mut coeffs = vec![BigUint::zero(); self.degree() * k];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[(i + 1) * k - 1] = a.clone();
        }
        SubdivisionPolynomial { coeffs }
    }
}

impl fmt::Display for SubdivisionPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratpoly())
    }
}

/// A validated subdivision polynomial together with an isolating interval
/// for its root `β` in `(0, 1)` and the reciprocal relation satisfied by
/// `λ = 1/β`.
#[derive(Debug)]
pub struct BetaContext {
    poly: SubdivisionPolynomial,
    poly_rat: RatPoly,
    root: AlgebraicRoot,
    reciprocal: Vec<BigUint>,
}

impl BetaContext {
    pub fn new(poly: SubdivisionPolynomial) -> Ctx {
        let poly_rat = poly.to_ratpoly();
        let iv = isolate_positive_root(&poly_rat)
            .expect("nontrivial subdivision polynomials have one root in (0,1)");
        // a tight starting interval makes most sign decisions a single enclosure
        let width = BigRational::new(BigInt::one(), BigInt::one() << 64);
        let iv = iv.refine_to(&poly_rat, &width);
        let rational = rational_root(&poly);
        // dividing P(β) = 0 by β^n gives λ^n = a_1 λ^{n-1} + ... + a_n
        let reciprocal = poly.coeffs.clone();
        Arc::new(BetaContext {
            root: AlgebraicRoot::new(poly_rat.clone(), iv, rational),
            poly,
            poly_rat,
            reciprocal,
        })
    }

    pub fn poly(&self) -> &SubdivisionPolynomial {
        &self.poly
    }

    pub fn poly_rat(&self) -> &RatPoly {
        &self.poly_rat
    }

    pub fn root(&self) -> &AlgebraicRoot {
        &self.root
    }

    pub fn root_interval(&self) -> &RootInterval {
        self.root.interval()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// `[r_1, ..., r_n]` with `λ^n = r_1 λ^{n-1} + ... + r_n`.
    pub fn reciprocal_relation(&self) -> &[BigUint] {
        &self.reciprocal
    }

    pub fn is_linear(&self) -> bool {
        self.degree() == 1
    }
}

/// Validate coefficients `a_1..a_n` and build the context.
pub fn validate_subdivision(coeffs: &[BigInt]) -> Result<Ctx, SubdivisionError> {
    Ok(BetaContext::new(SubdivisionPolynomial::new(coeffs)?))
}

pub fn validate_subdivision_u64(coeffs: &[u64]) -> Result<Ctx, SubdivisionError> {
    Ok(BetaContext::new(SubdivisionPolynomial::from_u64(coeffs)?))
}
