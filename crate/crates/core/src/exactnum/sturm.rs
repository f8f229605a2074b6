use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::RatPoly;
use super::ExactError;

/// Sturm chain `p, p', -rem(p, p'), ...`.
pub fn sturm_sequence(p: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_variations(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = Ordering::Equal;
    for p in seq {
        let s = p.sign_at(x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
///
/// Both endpoints must be non-roots; callers that cannot guarantee this use
/// [`count_roots_open`].
pub fn sturm_count(p: &RatPoly, lo: &BigRational, hi: &BigRational) -> Result<usize, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(ExactError::EmptyInterval);
    }
    for e in [lo, hi] {
        if p.eval(e).is_zero() {
            return Err(ExactError::EndpointIsRoot(e.clone()));
        }
    }
    let seq = sturm_sequence(p);
    let vl = sign_variations(&seq, lo);
    let vh = sign_variations(&seq, hi);
    Ok(vl - vh)
}

/// Like [`sturm_count`] but tolerates roots at the endpoints: those linear
/// factors are divided out of the squarefree part before counting.
pub fn count_roots_open(p: &RatPoly, lo: &BigRational, hi: &BigRational) -> Result<usize, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(ExactError::EmptyInterval);
    }
    let g = p.gcd(&p.derivative());
    let mut q = if g.degree().unwrap_or(0) == 0 { p.clone() } else { p.div_rem(&g).0 };
    for e in [lo, hi] {
        if q.eval(e).is_zero() {
            let lin = RatPoly::new(vec![-e.clone(), BigRational::one()]);
            q = q.div_rem(&lin).0;
        }
    }
    if q.degree() == Some(0) {
        return Ok(0);
    }
    sturm_count(&q, lo, hi)
}

/// Open rational interval `(lo, hi)` isolating a single simple root of a
/// polynomial held by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo < hi);
        RootInterval { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    /// Halve the interval, keeping the half with the sign change of `p`.
    pub fn bisect(&self, p: &RatPoly) -> RootInterval {
        let mid = self.midpoint();
        let sm = p.sign_at(&mid);
        if sm == Ordering::Equal {
            let quarter = self.width() / BigRational::from_integer(4.into());
            return RootInterval::new(&self.lo + &quarter, &self.hi - &quarter);
        }
        if p.sign_at(&self.lo) != sm {
            RootInterval::new(self.lo.clone(), mid)
        } else {
            RootInterval::new(mid, self.hi.clone())
        }
    }

    pub fn refine_to(&self, p: &RatPoly, width: &BigRational) -> RootInterval {
        let mut iv = self.clone();
        while &iv.width() > width {
            iv = iv.bisect(p);
        }
        iv
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

/// Isolating interval for the root of `p` in `(0, 1)`.
///
/// `p` must be a nontrivial subdivision polynomial, whose positive root is
/// unique and lies strictly between 0 and 1; the Sturm count confirms it.
pub fn isolate_positive_root(p: &RatPoly) -> Result<RootInterval, ExactError> {
    let iv = RootInterval::new(BigRational::zero(), BigRational::one());
    let count = sturm_count(p, &iv.lo, &iv.hi)?;
    if count != 1 {
        return Err(ExactError::NotIsolated(count));
    }
    Ok(iv)
}

/// A real algebraic number given as the unique root of `poly` inside an
/// isolating interval in `[0, 1]`, with exact sign decisions for rational
/// polynomial expressions evaluated at it.
#[derive(Clone, Debug)]
pub struct AlgebraicRoot {
    poly: RatPoly,
    interval: RootInterval,
    rational: Option<BigRational>,
}

impl AlgebraicRoot {
    pub fn new(poly: RatPoly, interval: RootInterval, rational: Option<BigRational>) -> Self {
        debug_assert!(!interval.lo.is_negative());
        AlgebraicRoot { poly, interval, rational }
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn interval(&self) -> &RootInterval {
        &self.interval
    }

    pub fn rational(&self) -> Option<&BigRational> {
        self.rational.as_ref()
    }

    /// Sign of `d(root)`.
    ///
    /// Zero is decided by `gcd(d, poly)` having a root in the isolating
    /// interval; otherwise the interval is bisected until an interval
    /// enclosure of `d` excludes zero.
    pub fn sign_of(&self, d: &RatPoly) -> Ordering {
        if d.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = &self.rational {
            return d.sign_at(r);
        }
        if d.degree() == Some(0) {
            return d.coeff(0).cmp(&BigRational::zero());
        }
        if let Some(s) = Self::enclosure_sign(d, &self.interval) {
            return s;
        }
        let g = d.gcd(&self.poly);
        if g.degree().unwrap_or(0) >= 1 {
            // endpoints of the isolating interval are never roots of poly, hence not of g
            let n = sturm_count(&g, &self.interval.lo, &self.interval.hi)
                .expect("isolating interval endpoints are not roots");
            if n >= 1 {
                return Ordering::Equal;
            }
        }
        let mut iv = self.interval.clone();
        loop {
            iv = iv.bisect(&self.poly);
            if let Some(s) = Self::enclosure_sign(d, &iv) {
                return s;
            }
        }
    }

    fn enclosure_sign(d: &RatPoly, iv: &RootInterval) -> Option<Ordering> {
        let (a, b) = d.enclose_nonneg(&iv.lo, &iv.hi);
        if a.is_positive() {
            Some(Ordering::Greater)
        } else if b.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Rational enclosure `[lo, hi]` of `d(root)` of width at most `width`.
    pub fn enclose(&self, d: &RatPoly, width: &BigRational) -> (BigRational, BigRational) {
        if let Some(r) = &self.rational {
            let v = d.eval(r);
            return (v.clone(), v);
        }
        let mut iv = self.interval.clone();
        loop {
            let (a, b) = d.enclose_nonneg(&iv.lo, &iv.hi);
            if &(&b - &a) <= width {
                return (a, b);
            }
            iv = iv.bisect(&self.poly);
        }
    }
}
