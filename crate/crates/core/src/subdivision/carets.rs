use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{BetaContext, SubdivisionError};

pub const DEFAULT_CARET_CAP: usize = 10_000;

/// Leg lengths of a caret, left to right. A leg of length `L` produces a
/// child cell whose length is `β^L` times the parent's.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaretShape(pub Vec<u32>);

impl CaretShape {
    pub fn legs(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Every leg multiplied by `k`.
    pub fn scaled(&self, k: u32) -> CaretShape {
        CaretShape(self.0.iter().map(|l| l * k).collect())
    }

    /// Whether the leg multiset has exactly `a_i` legs of length `i`.
    pub fn fits(&self, ctx: &BetaContext) -> bool {
        let n = ctx.degree();
        let mut counts = vec![0u64; n + 1];
        for &l in &self.0 {
            let l = l as usize;
            if l == 0 || l > n {
                return false;
            }
            counts[l] += 1;
        }
        (1..=n).all(|i| ctx.poly().coeff(i) == BigUint::from(counts[i]))
    }
}

impl fmt::Display for CaretShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// `(Σ k_i)! / Π k_i!`
pub fn multinomial(counts: &[BigUint]) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut acc = BigUint::one();
    for k in counts {
        // multiply by C(total + k, k) incrementally
        let mut i = BigUint::one();
        while &i <= k {
            total += 1u32;
            acc = acc * &total / &i;
            i += 1u32;
        }
    }
    acc
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every distinct ordering of the context's leg multiset, sorted
/// lexicographically.
pub fn enumerate_carets(ctx: &BetaContext, cap: usize) -> Result<Vec<CaretShape>, SubdivisionError> {
    let counts: Vec<BigUint> = ctx.poly().coeffs().to_vec();
    let count = multinomial(&counts);
    if count > BigUint::from(cap) {
        return Err(SubdivisionError::TooManyCarets { count, cap });
    }
    let mut legs = Vec::new();
    for (i, a) in counts.iter().enumerate() {
        let a = a.to_usize().expect("bounded by the cap check");
        legs.extend(std::iter::repeat_n(i as u32 + 1, a));
    }
    let mut out = vec![CaretShape(legs.clone())];
    while next_permutation(&mut legs) {
        out.push(CaretShape(legs.clone()));
    }
    debug_assert_eq!(BigUint::from(out.len()), count);
    Ok(out)
}
