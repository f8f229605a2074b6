use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PlError, PlMap};
use crate::exactnum::FieldElem;
use crate::subdivision::Ctx;

pub const SLOPE_WINDOW: i64 = 64;

/// How breakpoint membership in `Z[β]` of the target context is decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubringOracle {
    /// Linear target `nx - 1`: `Z[1/n]`.
    Adic { n: BigInt },
    /// Monic target: integer power-basis coordinates.
    IntegerBasis,
}

#[derive(Clone, Debug)]
pub struct SlopeCheck {
    pub slope: FieldElem,
    /// `k` with `slope = β^k` for the target `β`, when found in the window.
    pub exponent: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct BreakpointCheck {
    pub x: FieldElem,
    pub y: FieldElem,
    pub x_ok: bool,
    pub y_ok: bool,
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub oracle: SubringOracle,
    /// `k` with the map's root raised to `k` equal to the target root.
    pub power: usize,
    pub slopes: Vec<SlopeCheck>,
    pub slopes_ok: bool,
    pub breakpoints: Vec<BreakpointCheck>,
    pub breakpoints_ok: bool,
    /// Distinct breakpoint coordinates outside the subring, in vertex order.
    pub offending: Vec<FieldElem>,
    pub verdict: bool,
}

fn in_adic(r: &BigRational, n: &BigInt) -> bool {
    let mut d = r.denom().clone();
    loop {
        if d.is_one() {
            return true;
        }
        let g = d.gcd(n);
        if g.is_one() {
            return false;
        }
        d /= g;
    }
}

/// Exponent `k` in `[-window, window]` with `x = b^k`, where `0 < b < 1`.
fn log_exact(x: &FieldElem, b: &FieldElem, window: i64) -> Option<i64> {
    if x.sign() != Ordering::Greater {
        return None;
    }
    // b^k decreases in k
    let (mut lo, mut hi) = (-window, window);
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        let p = b.pow(mid).expect("b is nonzero");
        match x.compare(&p).expect("same context") {
            Ordering::Equal => return Some(mid),
            Ordering::Greater => hi = mid - 1,
            Ordering::Less => lo = mid + 1,
        }
    }
    None
}

fn power_of(src: &Ctx, target: &Ctx) -> Result<usize, PlError> {
    let k = src.degree() / target.degree();
    if k == 0
        || !src.degree().is_multiple_of(target.degree())
        || target.poly().compose_power(k) != *src.poly()
    {
        return Err(PlError::UnsupportedSubring(format!(
            "map context {} is not {} composed with a power of x",
            src.poly(),
            target.poly()
        )));
    }
    Ok(k)
}

/// For each slope, the `k` with `slope = β^k` for the target root, searched
/// in `[-SLOPE_WINDOW, SLOPE_WINDOW]`. Needs no subring oracle.
pub fn slope_exponents(f: &PlMap, target: &Ctx) -> Result<Vec<SlopeCheck>, PlError> {
    let k = power_of(f.context(), target)?;
    let b = FieldElem::beta_pow(f.context(), k as i64);
    Ok(f.slopes()
        .into_iter()
        .map(|s| SlopeCheck { exponent: log_exact(&s, &b, SLOPE_WINDOW), slope: s })
        .collect())
}

/// Check that every slope is a power of the target root and every breakpoint
/// coordinate lies in `Z[β]` for the target. The map may live in the target
/// context itself or in the context of `P(x^k)` for the target polynomial
/// `P`, where the target root is the `k`-th power of the map's root.
///
/// Coordinates are read from the reduced power-basis representative, which
/// is exact when the map's polynomial is irreducible.
pub fn validate_membership(f: &PlMap, target: &Ctx) -> Result<MembershipReport, PlError> {
    let k = power_of(f.context(), target)?;
    let oracle = if target.is_linear() {
        SubringOracle::Adic { n: BigInt::from(target.poly().coeff(1)) }
    } else if target.poly().is_monic() {
        SubringOracle::IntegerBasis
    } else {
        return Err(PlError::UnsupportedSubring(format!(
            "Z[β] for the non-monic polynomial {} has no supported membership test",
            target.poly()
        )));
    };

    let member = |x: &FieldElem| -> bool {
        let c = x.coeffs();
        if c.iter().enumerate().any(|(i, v)| i % k != 0 && !v.is_zero()) {
            return false;
        }
        match &oracle {
            SubringOracle::Adic { n } => in_adic(&c[0], n),
            SubringOracle::IntegerBasis => c.iter().all(BigRational::is_integer),
        }
    };

    let slopes = slope_exponents(f, target)?;
    let slopes_ok = slopes.iter().all(|s| s.exponent.is_some());

    let mut offending: Vec<FieldElem> = Vec::new();
    let breakpoints: Vec<BreakpointCheck> = f
        .breakpoints()
        .iter()
        .map(|(x, y)| {
            let (x_ok, y_ok) = (member(x), member(y));
            for (v, ok) in [(x, x_ok), (y, y_ok)] {
                if !ok && !offending.contains(v) {
                    offending.push(v.clone());
                }
            }
            BreakpointCheck { x: x.clone(), y: y.clone(), x_ok, y_ok }
        })
        .collect();
    let breakpoints_ok = offending.is_empty();
    Ok(MembershipReport {
        oracle,
        power: k,
        slopes,
        slopes_ok,
        breakpoints,
        breakpoints_ok,
        offending,
        verdict: slopes_ok && breakpoints_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::validate_subdivision_u64;

    #[test]
    fn adic() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert!(in_adic(&q(3, 8), &BigInt::from(2)));
        assert!(!in_adic(&q(1, 3), &BigInt::from(2)));
        assert!(in_adic(&q(5, 36), &BigInt::from(6)));
        assert!(!in_adic(&q(1, 10), &BigInt::from(6)));
    }

    #[test]
    fn dyadic_map_is_in_f() {
        let ctx = validate_subdivision_u64(&[2]).unwrap();
        let f = PlMap::from_rationals(&ctx, &[((0, 1), (0, 1)), ((1, 4), (1, 2)), ((1, 2), (3, 4)), ((1, 1), (1, 1))]).unwrap();
        let r = validate_membership(&f, &ctx).unwrap();
        assert!(r.verdict);
        let ks: Vec<_> = r.slopes.iter().map(|s| s.exponent).collect();
        // slopes 2, 1, 1/2 are (1/2)^-1, (1/2)^0, (1/2)^1
        assert_eq!(ks, vec![Some(-1), Some(0), Some(1)]);
    }

    #[test]
    fn triadic_breakpoint_fails() {
        let ctx = validate_subdivision_u64(&[2]).unwrap();
        let f = PlMap::from_rationals(&ctx, &[((0, 1), (0, 1)), ((1, 3), (2, 3)), ((1, 1), (1, 1))]).unwrap();
        let r = validate_membership(&f, &ctx).unwrap();
        assert!(!r.verdict);
        assert!(r.slopes_ok);
        assert_eq!(r.offending.len(), 2);
    }

    #[test]
    fn unsupported_targets() {
        let a = validate_subdivision_u64(&[1, 2]).unwrap();
        assert!(matches!(
            validate_membership(&PlMap::identity(&a), &a),
            Err(PlError::UnsupportedSubring(_))
        ));
        let g = validate_subdivision_u64(&[1, 1]).unwrap();
        let t = validate_subdivision_u64(&[1, 0, 1]).unwrap();
        assert!(validate_membership(&PlMap::identity(&t), &g).is_err());
    }
}
