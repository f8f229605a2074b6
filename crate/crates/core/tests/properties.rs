use std::cmp::Ordering;

use betaforge_core::exactnum::{isolate_positive_root, sturm_count, FieldElem};
use betaforge_core::plmaps::{from_partition_pair, PlMap};
use betaforge_core::representability::{
    apply, boolean_powers, build_matrix, decide_nonneg, matrix_power, verify_certificate,
    CertificateKind, CoeffVector,
};
use betaforge_core::subdivision::{
    enumerate_carets, exponent_gcd, validate_subdivision_u64, CaretShape, Ctx, DEFAULT_CARET_CAP,
};
use betaforge_core::treepairs::{
    compose_pairs, equivalent, partition_to_tree, reduce, tree_to_partition, Tree, TreePair,
    DEFAULT_COMPOSE_BUDGET,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

fn ctx(c: &[u64]) -> Ctx {
    validate_subdivision_u64(c).unwrap()
}

/// Contexts with small caret sets: F, F_3, the golden ratio, x^2 + 2x - 1
/// and the cubic x^3 + x - 1.
fn small_contexts() -> Vec<Ctx> {
    vec![ctx(&[2]), ctx(&[3]), ctx(&[1, 1]), ctx(&[2, 1]), ctx(&[1, 0, 1])]
}

fn elem(c: &Ctx, coords: &[i64], den: i64) -> FieldElem {
    let q: Vec<BigRational> = coords.iter().map(|&n| BigRational::new(n.into(), den.into())).collect();
    FieldElem::from_coeffs(c, q[..c.degree().min(q.len())].to_vec())
}

fn coords() -> impl Strategy<Value = (Vec<i64>, i64)> {
    (prop::collection::vec(-20i64..=20, 4), 1i64..=7)
}

fn subdivision_coeffs() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..=3, 1..=4)
        .prop_filter("valid subdivision polynomial", |c| validate_subdivision_u64(c).is_ok())
}

fn random_tree(shapes: &[CaretShape], moves: &[(usize, usize)]) -> Tree {
    let mut t = Tree::Leaf;
    for &(leaf, shape) in moves {
        t = t.expand_leaf(leaf % t.leaves(), &shapes[shape % shapes.len()]);
    }
    t
}

/// A random pair whose trees each carry `moves.len()` carets.
fn random_pair(c: &Ctx, left: &[(usize, usize)], right: &[(usize, usize)]) -> TreePair {
    let shapes = enumerate_carets(c, DEFAULT_CARET_CAP).unwrap();
    let n = left.len().min(right.len());
    TreePair::new(c, random_tree(&shapes, &left[..n]), random_tree(&shapes, &right[..n])).unwrap()
}

fn moves(max: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0usize..64, 0usize..64), 0..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_axioms(k in 0usize..5, (x, dx) in coords(), (y, dy) in coords(), (z, dz) in coords()) {
        let c = &small_contexts()[k];
        let (x, y, z) = (elem(c, &x, dx), elem(c, &y, dy), elem(c, &z, dz));
        let (zero, one) = (FieldElem::zero(c), FieldElem::one(c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x + &zero, x.clone());
        prop_assert_eq!(&x * &one, x.clone());
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn approx_of_product_overlaps_interval_product(k in 0usize..5, (x, dx) in coords(), (y, dy) in coords(), bits in 4u32..60) {
        let c = &small_contexts()[k];
        let (x, y) = (elem(c, &x, dx), elem(c, &y, dy));
        let w = BigRational::new(1.into(), BigInt::from(2u8).pow(bits));
        let prod = (&x * &y).approx(&w);
        prop_assert!(prod.width() <= w);
        prop_assert!(prod.overlaps(&x.approx(&w).mul(&y.approx(&w))));
    }

    #[test]
    fn sign_agrees_with_disjoint_approximations(k in 0usize..5, (x, dx) in coords(), (y, dy) in coords()) {
        let c = &small_contexts()[k];
        let (x, y) = (elem(c, &x, dx), elem(c, &y, dy));
        let w = BigRational::new(1.into(), BigInt::from(1u64 << 40));
        let (ax, ay) = (x.approx(&w), y.approx(&w));
        if ax.hi < ay.lo {
            prop_assert_eq!((&x - &y).sign(), Ordering::Less);
        } else if ay.hi < ax.lo {
            prop_assert_eq!((&x - &y).sign(), Ordering::Greater);
        }
    }

    #[test]
    fn isolated_root_is_unique_in_its_interval(c in subdivision_coeffs()) {
        let q = ctx(&c);
        let iv = isolate_positive_root(q.poly_rat()).unwrap();
        prop_assert_eq!(sturm_count(q.poly_rat(), &iv.lo, &iv.hi).unwrap(), 1);
    }

    #[test]
    fn caret_count_is_multinomial(c in subdivision_coeffs()) {
        let q = ctx(&c);
        let fact = |n: u64| (1..=n).fold(BigUint::from(1u8), |a, i| a * i);
        let expect = fact(c.iter().sum()) / c.iter().fold(BigUint::from(1u8), |a, &k| a * fact(k));
        if expect > BigUint::from(DEFAULT_CARET_CAP) {
            prop_assert!(enumerate_carets(&q, DEFAULT_CARET_CAP).is_err());
            return Ok(());
        }
        let shapes = enumerate_carets(&q, DEFAULT_CARET_CAP).unwrap();
        prop_assert_eq!(BigUint::from(shapes.len()), expect);
        let one = FieldElem::one(&q);
        for s in &shapes {
            let total = s.legs().iter().fold(FieldElem::zero(&q), |a, &l| &a + &FieldElem::beta_pow(&q, l as i64));
            prop_assert!((&total - &one).is_zero());
        }
    }

    #[test]
    fn exponent_gcd_round_trip(c in subdivision_coeffs(), k in 1usize..4) {
        let p = ctx(&c).poly().compose_power(k);
        let (g, base) = exponent_gcd(&p);
        prop_assert_eq!(g % k, 0);
        prop_assert_eq!(base.compose_power(g), p);
    }

    #[test]
    fn matrix_is_multiplication_by_lambda(c in subdivision_coeffs(), v in prop::collection::vec(-9i64..=9, 4)) {
        let q = ctx(&c);
        let a = build_matrix(&q);
        let v = CoeffVector::from_i64(&v[..q.degree().min(4)]);
        prop_assume!(v.dim() == q.degree());
        let av = apply(&a, &v).unwrap();
        let lambda = FieldElem::beta_pow(&q, -1);
        prop_assert_eq!(av.value(&q), &lambda * &v.value(&q));
        let w = BigRational::new(1.into(), BigInt::from(10u64.pow(12)));
        let lhs = av.value(&q).approx(&w);
        let rhs = (&lambda * &v.value(&q)).approx(&w);
        prop_assert!(lhs.overlaps(&rhs));
    }

    #[test]
    fn matrix_powers_add(c in subdivision_coeffs(), m in 0u64..12, n in 0u64..12) {
        let a = build_matrix(&ctx(&c));
        prop_assert_eq!(matrix_power(&a, m + n), matrix_power(&a, m).mul(&matrix_power(&a, n)));
    }

    #[test]
    fn patterns_of_powers_are_boolean_powers(c in subdivision_coeffs()) {
        let a = build_matrix(&ctx(&c));
        for (n, b) in boolean_powers(&a, 20).iter().enumerate() {
            prop_assert_eq!(&matrix_power(&a, n as u64).pattern(), b);
        }
    }

    #[test]
    fn certificates_verify(c in subdivision_coeffs(), v in prop::collection::vec(-3i64..=3, 4)) {
        let q = ctx(&c);
        let p = CoeffVector::from_i64(&v[..q.degree().min(4)]);
        prop_assume!(p.dim() == q.degree() && !p.is_zero());
        let cert = decide_nonneg(&q, &p, 64).unwrap();
        prop_assert!(verify_certificate(&q, &p, &cert));
        match &cert.kind {
            CertificateKind::Witness { n, result } => {
                prop_assert!(result.is_nonnegative());
                prop_assert_eq!(&CoeffVector(matrix_power(&build_matrix(&q), *n as u64).mul_vec(p.entries())), result);
            }
            CertificateKind::Impossible(_) => {
                let a = build_matrix(&q);
                let mut v = p.clone();
                for _ in 0..=64 {
                    prop_assert!(!v.is_nonnegative());
                    v = apply(&a, &v).unwrap();
                }
            }
            CertificateKind::Inconclusive { .. } => {}
        }
    }

    #[test]
    fn pl_group_axioms(k in 0usize..4, a in moves(3), b in moves(3), c in moves(3), d in moves(3), e in moves(3), f in moves(3)) {
        let q = &small_contexts()[k];
        let (f1, f2, f3) = (random_pair(q, &a, &b).to_plmap(), random_pair(q, &c, &d).to_plmap(), random_pair(q, &e, &f).to_plmap());
        let id = PlMap::identity(q);
        prop_assert_eq!(f1.compose(&f2).unwrap().compose(&f3).unwrap(), f1.compose(&f2.compose(&f3).unwrap()).unwrap());
        prop_assert_eq!(f1.compose(&id).unwrap(), f1.clone());
        prop_assert_eq!(id.compose(&f1).unwrap(), f1.clone());
        prop_assert!(f1.compose(&f1.invert()).unwrap().is_identity());
        prop_assert!(f1.invert().compose(&f1).unwrap().is_identity());
        let g = f1.compose(&f2).unwrap();
        let slopes = g.slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn partition_pair_round_trip(k in 0usize..4, a in moves(4), b in moves(4)) {
        let q = &small_contexts()[k];
        let tp = random_pair(q, &a, &b);
        let pp = betaforge_core::plmaps::PartitionPair::new(tree_to_partition(q, tp.left()), tree_to_partition(q, tp.right())).unwrap();
        let f = from_partition_pair(&pp);
        let two = FieldElem::from_int(q, 2);
        let pts = pp.domain.points();
        for (i, w) in pts.windows(2).enumerate() {
            let mid = (&w[0] + &w[1]).checked_div(&two).unwrap();
            let (c0, c1) = (&pp.codomain.points()[i], &pp.codomain.points()[i + 1]);
            let expect = c0 + &(&(&mid - &w[0]) * &(c1 - c0).checked_div(&(&w[1] - &w[0])).unwrap());
            prop_assert_eq!(f.eval(&mid).unwrap(), expect);
        }
        prop_assert_eq!(from_partition_pair(&f.to_partition_pair()), f);
    }

    #[test]
    fn pair_composition_is_a_homomorphism(k in 0usize..4, a in moves(3), b in moves(3), c in moves(3), d in moves(3)) {
        let q = &small_contexts()[k];
        let (f, g) = (random_pair(q, &a, &b), random_pair(q, &c, &d));
        let h = compose_pairs(&f, &g, DEFAULT_COMPOSE_BUDGET).unwrap();
        prop_assert_eq!(h.to_plmap(), f.to_plmap().compose(&g.to_plmap()).unwrap());
    }

    #[test]
    fn reduce_is_idempotent_and_exact(k in 0usize..5, a in moves(5), b in moves(5)) {
        let q = &small_contexts()[k];
        let tp = random_pair(q, &a, &b);
        let r = reduce(&tp);
        prop_assert_eq!(r.to_plmap(), tp.to_plmap());
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert!(r.leaves() <= tp.leaves());
    }

    #[test]
    fn equivalence_matches_map_equality(k in 0usize..5, a in moves(3), b in moves(3), c in moves(3), d in moves(3), grow in moves(3), related in any::<bool>()) {
        let q = &small_contexts()[k];
        let tp = random_pair(q, &a, &b);
        let other = if related {
            // mirrored carets leave the map unchanged
            let shapes = enumerate_carets(q, DEFAULT_CARET_CAP).unwrap();
            let (mut l, mut r) = (tp.left().clone(), tp.right().clone());
            for &(leaf, s) in &grow {
                let j = leaf % l.leaves();
                l = l.expand_leaf(j, &shapes[s % shapes.len()]);
                r = r.expand_leaf(j, &shapes[s % shapes.len()]);
            }
            TreePair::new(q, l, r).unwrap()
        } else {
            random_pair(q, &c, &d)
        };
        prop_assert_eq!(equivalent(&tp, &other).unwrap(), tp.to_plmap() == other.to_plmap());
    }

    #[test]
    fn partitions_recover_depths(k in 0usize..5, a in moves(6)) {
        let q = &small_contexts()[k];
        let shapes = enumerate_carets(q, DEFAULT_CARET_CAP).unwrap();
        let t = random_tree(&shapes, &a);
        let p = tree_to_partition(q, &t);
        let total = p.lengths().iter().fold(FieldElem::zero(q), |s, l| &s + l);
        prop_assert_eq!(total, FieldElem::one(q));
        let bound = t.leaf_depths().into_iter().max().unwrap_or(0);
        let back = partition_to_tree(&p, bound).unwrap();
        prop_assert_eq!(back.tree.leaf_depths(), t.leaf_depths());
    }

    #[test]
    fn pair_composition_is_associative_up_to_equivalence(k in 0usize..5, a in moves(3), b in moves(3), c in moves(3), d in moves(3), e in moves(2), f in moves(2)) {
        let q = &small_contexts()[k];
        let (x, y, z) = (random_pair(q, &a, &b), random_pair(q, &c, &d), random_pair(q, &e, &f));
        let cp = |u: &TreePair, v: &TreePair| compose_pairs(u, v, DEFAULT_COMPOSE_BUDGET).unwrap();
        prop_assert!(equivalent(&cp(&cp(&x, &y), &z), &cp(&x, &cp(&y, &z))).unwrap());
        prop_assert!(equivalent(&cp(&x, &x.inverse()), &TreePair::identity(q)).unwrap());
        prop_assert!(equivalent(&cp(&x.inverse(), &x), &TreePair::identity(q)).unwrap());
    }
}
