use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{validate_subdivision_u64, SubdivisionError, SubdivisionPolynomial};
use crate::exactnum::FieldElem;

/// `ax^2 + bx - 1` admits tree pairs iff `a <= b`.
pub fn quadratic_tree_pair_defined(a: u64, b: u64) -> bool {
    a <= b
}

/// `(k, Q)` with `k` the gcd of the exponents carrying nonzero coefficients
/// and `p(x) = Q(x^k)`.
pub fn exponent_gcd(p: &SubdivisionPolynomial) -> (usize, SubdivisionPolynomial) {
    let k = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .fold(0usize, |g, (i, _)| g.gcd(&(i + 1)));
    let base = p.coeffs().iter().skip(k - 1).step_by(k).cloned().collect();
    (k, SubdivisionPolynomial { coeffs: base })
}

/// The root in `(0, 1)` when it is rational. Any rational root of
/// `a_n x^n + ... - 1` is `±1/q` with `q | a_n`.
pub fn rational_root(p: &SubdivisionPolynomial) -> Option<BigRational> {
    let lead = p.coeffs().last()?.clone();
    let poly = p.to_ratpoly();
    let mut divisors = Vec::new();
    let mut q = BigUint::from(2u32);
    while &q * &q <= lead {
        if (&lead % &q).is_zero() {
            divisors.push(q.clone());
            divisors.push(&lead / &q);
        }
        q += 1u32;
    }
    if lead > BigUint::one() {
        divisors.push(lead);
    }
    divisors.sort();
    divisors.dedup();
    divisors.into_iter().find_map(|q| {
        let r = BigRational::new(BigInt::one(), BigInt::from(q));
        poly.eval(&r).is_zero().then_some(r)
    })
}

/// `α c^2 + γ cd + δ d^2 = rhs`, one coefficient of `(c + dβ)^2 = β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientEquation {
    pub c2: BigRational,
    pub cd: BigRational,
    pub d2: BigRational,
    pub rhs: BigRational,
}

impl fmt::Display for CoefficientEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, m) in [(&self.c2, "c^2"), (&self.cd, "cd"), (&self.d2, "d^2")] {
            if k.is_zero() {
                continue;
            }
            let sep = if first {
                if k.is_negative() { "-" } else { "" }
            } else if k.is_negative() {
                " - "
            } else {
                " + "
            };
            let abs = k.abs();
            if abs.is_one() {
                write!(f, "{sep}{m}")?;
            } else {
                write!(f, "{sep}({abs}){m}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " = {}", self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootMembership {
    Excluded,
    /// The root equals `c + dβ`.
    Member { c: BigRational, d: BigRational },
}

#[derive(Clone, Debug)]
pub struct SqrtMembershipReport {
    pub a: u64,
    pub b: u64,
    pub constant_equation: CoefficientEquation,
    pub beta_equation: CoefficientEquation,
    /// Whether the coefficient system has a rational solution.
    pub system_solvable: bool,
    pub rational_root: Option<BigRational>,
    pub verdict: RootMembership,
    pub trace: Vec<String>,
}

fn quadratic_context(a: u64, b: u64) -> Result<crate::subdivision::Ctx, SubdivisionError> {
    if a == 0 {
        return Err(SubdivisionError::NotQuadratic { a, b });
    }
    validate_subdivision_u64(&[b, a]).map_err(|_| SubdivisionError::NotQuadratic { a, b })
}

fn perfect_power(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// Decide whether `√β ∈ Z[β]` for `ax^2 + bx - 1` by comparing coefficients
/// of `(c + dβ)^2 = β` in the basis `{1, β}`.
pub fn sqrt_membership_quadratic(a: u64, b: u64) -> Result<SqrtMembershipReport, SubdivisionError> {
    let ctx = quadratic_context(a, b)?;
    let sq = FieldElem::beta(&ctx).pow(2).expect("positive power");
    let r = sq.coeffs();
    let (r0, r1) = (r[0].clone(), r[1].clone());
    let zero = BigRational::zero();
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());

    let constant_equation = CoefficientEquation {
        c2: one.clone(),
        cd: zero.clone(),
        d2: r0.clone(),
        rhs: zero.clone(),
    };
    let beta_equation = CoefficientEquation {
        c2: zero.clone(),
        cd: two,
        d2: r1,
        rhs: one.clone(),
    };

    let mut trace = vec![
        format!("beta^2 = {sq} in Z[beta]"),
        format!("(c + d beta)^2 = beta gives {constant_equation}"),
        format!("and {beta_equation}"),
    ];
    let ce = &constant_equation;
    let definite = ce.c2.is_positive()
        && ce.d2.is_positive()
        && &ce.cd * &ce.cd < BigRational::from_integer(4.into()) * &ce.c2 * &ce.d2;
    if !definite {
        return Err(SubdivisionError::Undecided);
    }
    trace.push(format!(
        "{} is a sum of nonnegative squares with positive weights, so c = d = 0",
        CoefficientEquation { rhs: zero.clone(), ..ce.clone() }
            .to_string()
            .trim_end_matches(" = 0")
    ));
    // the only candidate is (0, 0); the beta equation then reads 0 = rhs
    let system_solvable = beta_equation.rhs.is_zero();
    trace.push(format!("substituting c = d = 0 reads 0 = {}", beta_equation.rhs));

    let rational_root = rational_root(ctx.poly());
    let verdict = match &rational_root {
        None => {
            trace.push("1 and beta are independent over Q, so sqrt(beta) is not in Z[beta]".into());
            RootMembership::Excluded
        }
        Some(r) => {
            let n = r.denom().clone();
            trace.push(format!(
                "beta = {r} is rational, so the coefficient comparison does not apply"
            ));
            match perfect_power(&n, 2) {
                Some(m) => {
                    trace.push(format!("sqrt(beta) = 1/{m} = {m}·beta lies in Z[beta]"));
                    RootMembership::Member { c: zero, d: BigRational::from_integer(m) }
                }
                None => {
                    trace.push(format!("{n} is not a square, so sqrt(beta) is irrational"));
                    RootMembership::Excluded
                }
            }
        }
    };
    Ok(SqrtMembershipReport {
        a,
        b,
        constant_equation,
        beta_equation,
        system_solvable,
        rational_root,
        verdict,
        trace,
    })
}

#[derive(Clone, Debug)]
pub struct EvenRootReport {
    pub a: u64,
    pub b: u64,
    pub n: u32,
    pub sqrt: SqrtMembershipReport,
    pub verdict: RootMembership,
    pub trace: Vec<String>,
}

/// Decide whether the `2n`-th root of `β` lies in `Z[β]`. A ring element `r`
/// with `r^{2n} = β` would give `r^n = √β` in the ring.
pub fn even_root_exclusion(a: u64, b: u64, n: u32) -> Result<EvenRootReport, SubdivisionError> {
    if n == 0 {
        return Err(SubdivisionError::NotQuadratic { a, b });
    }
    let sqrt = sqrt_membership_quadratic(a, b)?;
    let mut trace = Vec::new();
    let verdict = match &sqrt.rational_root {
        None => {
            trace.push(format!(
                "if r^{} = beta with r in Z[beta] then r^{n} = sqrt(beta) is in Z[beta]",
                2 * n
            ));
            trace.push("but sqrt(beta) is not in Z[beta]".into());
            RootMembership::Excluded
        }
        Some(r) => {
            let den = r.denom().clone();
            match perfect_power(&den, 2 * n) {
                Some(m) => {
                    let d = num_traits::pow(m.clone(), 2 * n as usize - 1);
                    trace.push(format!(
                        "beta = 1/{m}^{}, so its {}-th root 1/{m} = {d}·beta is in Z[beta]",
                        2 * n,
                        2 * n
                    ));
                    RootMembership::Member { c: BigRational::zero(), d: BigRational::from_integer(d) }
                }
                None => {
                    trace.push(format!(
                        "{den} is not a perfect {}-th power, so the root is irrational",
                        2 * n
                    ));
                    RootMembership::Excluded
                }
            }
        }
    };
    Ok(EvenRootReport { a, b, n, sqrt, verdict, trace })
}

impl SqrtMembershipReport {
    pub fn excluded(&self) -> bool {
        self.verdict == RootMembership::Excluded
    }
}

impl EvenRootReport {
    pub fn excluded(&self) -> bool {
        self.verdict == RootMembership::Excluded
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[u64]) -> SubdivisionPolynomial {
        SubdivisionPolynomial::from_u64(c).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn definability() {
        assert!(quadratic_tree_pair_defined(1, 1));
        assert!(!quadratic_tree_pair_defined(3, 1));
        assert!(quadratic_tree_pair_defined(1, 2));
    }

    #[test]
    fn exponent_gcd_examples() {
        let (k, base) = exponent_gcd(&poly(&[0, 1, 0, 1]));
        assert_eq!(k, 2);
        assert_eq!(base, poly(&[1, 1]));
        let p = poly(&[1, 0, 1]);
        assert_eq!(exponent_gcd(&p), (1, p.clone()));
        let (k, base) = exponent_gcd(&poly(&[0, 0, 5, 0, 0, 7]));
        assert_eq!((k, base), (3, poly(&[5, 7])));
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&poly(&[1, 2])), Some(q(1, 2)));
        assert_eq!(rational_root(&poly(&[1, 1])), None);
        assert_eq!(rational_root(&poly(&[1, 3])), None);
        assert_eq!(rational_root(&poly(&[3])), Some(q(1, 3)));
        // (3x-1)(x^2+1) = 3x^3 - x^2 + 3x - 1 has a negative coefficient; use
        // (2x-1)(x^2+x+1) = 2x^3 + x^2 + x - 1
        assert_eq!(rational_root(&poly(&[1, 1, 2])), Some(q(1, 2)));
    }

    #[test]
    fn rational_root_quadratics_have_a_greater_than_b() {
        for a in 1..=50u64 {
            for b in 0..=50u64 {
                if a == 1 && b == 0 {
                    continue;
                }
                if let Some(r) = rational_root(&poly(&[b, a])) {
                    assert!(poly(&[b, a]).to_ratpoly().eval(&r).is_zero());
                    assert!(a > b, "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn coefficient_system_for_golden_ratio() {
        let rep = sqrt_membership_quadratic(1, 1).unwrap();
        assert_eq!(rep.constant_equation.d2, q(1, 1));
        assert_eq!(rep.beta_equation.d2, q(-1, 1));
        assert_eq!(rep.beta_equation.cd, q(2, 1));
        assert!(!rep.system_solvable);
        assert!(rep.excluded());
    }

    #[test]
    fn coefficient_system_matches_closed_form() {
        for a in 1..=10u64 {
            for b in 1..=10u64 {
                let rep = sqrt_membership_quadratic(a, b).unwrap();
                assert_eq!(rep.constant_equation.d2, q(1, a as i64));
                assert_eq!(rep.beta_equation.d2, q(-(b as i64), a as i64));
                assert!(!rep.system_solvable);
            }
        }
    }

    #[test]
    fn rational_square_roots_are_members() {
        // 4x^2 + 3x - 1 = (4x - 1)(x + 1), beta = 1/4, sqrt(beta) = 2 beta
        let rep = sqrt_membership_quadratic(4, 3).unwrap();
        assert_eq!(rep.verdict, RootMembership::Member { c: q(0, 1), d: q(2, 1) });
        let rep = sqrt_membership_quadratic(2, 1).unwrap();
        assert!(rep.excluded());
    }

    #[test]
    fn even_roots() {
        assert!(even_root_exclusion(1, 1, 1).unwrap().excluded());
        assert!(even_root_exclusion(1, 1, 2).unwrap().excluded());
        assert!(even_root_exclusion(2, 3, 1).unwrap().excluded());
        // beta = 1/16 for 16x^2 + 15x - 1; its 4th root 1/2 = 8 beta
        let rep = even_root_exclusion(16, 15, 2).unwrap();
        assert_eq!(rep.verdict, RootMembership::Member { c: q(0, 1), d: q(8, 1) });
    }

    #[test]
    fn rejects_non_quadratics() {
        assert!(sqrt_membership_quadratic(0, 3).is_err());
        assert!(sqrt_membership_quadratic(1, 0).is_err());
    }
}
