//! End-to-end checks of the library against fixed reference values. Each
//! check is exact unless it says otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::FieldElem;
use crate::plmaps::{counterexample_map, tau_context, validate_membership, Arrangement, Partition, PlMap};
use crate::representability::{
    apply, boolean_cycle, boolean_powers, build_matrix, decide_nonneg_with, matrix_power,
    verify_certificate_with, CertificateKind, CoeffVector, IntMatrix, SubstitutionMatrix,
    DEFAULT_MAX_N,
};
use crate::subdivision::{
    enumerate_carets, even_root_exclusion, sqrt_membership_quadratic, validate_subdivision_u64,
    CaretShape, RootMembership, Ctx, DEFAULT_CARET_CAP,
};
use crate::treepairs::{
    caret_bijection, check_relations, compose_pairs, emit_presentation, enumerate_trees,
    partition_to_tree, power_map_down, power_map_up, check_ftau_relations, tree_to_partition,
    Convention, Tree, TreeError, TreePair, DEFAULT_COMPOSE_BUDGET,
};

#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    /// Iteration bound for the nonnegativity search and cycle detection.
    pub max_n: usize,
    /// Perturb every substitution matrix by one in its top-right entry.
    pub corrupt_matrix: bool,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig { max_n: DEFAULT_MAX_N, corrupt_matrix: false }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub number: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:>2} {:<28} {}", self.number, self.title, self.detail)
    }
}

struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn finish(self, number: u8, title: &'static str) -> CriterionResult {
        let passed = self.failures.is_empty();
        let detail = if passed { self.notes.join("; ") } else { self.failures.join("; ") };
        CriterionResult { number, title, passed, detail }
    }
}

fn ctx(coeffs: &[u64]) -> Ctx {
    validate_subdivision_u64(coeffs).expect("fixed contexts are valid")
}

fn quartic() -> Ctx {
    ctx(&[0, 1, 0, 1])
}

fn matrix_for(c: &Ctx, cfg: &AcceptanceConfig) -> SubstitutionMatrix {
    let a = build_matrix(c);
    if !cfg.corrupt_matrix {
        return a;
    }
    let mut m = a.matrix().clone();
    let n = m.dim() - 1;
    let bumped = m.entry(0, n) + BigInt::one();
    m.set(0, n, bumped);
    a.with_matrix(m)
}

pub fn matrix_fidelity(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let a = matrix_for(&quartic(), cfg);
    let expect = IntMatrix::from_i64(&[&[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]]);
    c.check(*a.matrix() == expect, format!("A = {} differs", a.matrix()));
    let p = CoeffVector::from_i64(&[-1, 0, 1, 1]);
    match apply(&a, &p) {
        Ok(v) => c.check(v == CoeffVector::from_i64(&[0, 0, 1, -1]), format!("Ap = {v}")),
        Err(e) => c.check(false, e.to_string()),
    }
    let a4 = IntMatrix::from_i64(&[&[2, 0, 1, 0], &[0, 2, 0, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
    c.check(matrix_power(&a, 4) == a4, "A^4 differs");
    c.note("A, Ap and A^4 match");
    c.finish(1, "matrix fidelity")
}

pub fn impossibility_certificate(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let a = matrix_for(&quartic(), cfg);
    let p = CoeffVector::from_i64(&[-1, 0, 1, 1]);
    match decide_nonneg_with(&a, &p, cfg.max_n) {
        Ok(cert) => {
            match &cert.kind {
                CertificateKind::Impossible(cy) => {
                    c.check(cy.cycle_length == 2, format!("cycle length {}", cy.cycle_length));
                    c.note(format!("impossible, split at {}, cycle {}+{}k", cy.split_at, cy.cycle_start, cy.cycle_length));
                }
                _ => c.check(false, format!("expected impossible, got {}", cert.kind_name())),
            }
            c.check(verify_certificate_with(&a, &p, &cert), "certificate does not verify");
        }
        Err(e) => c.check(false, e.to_string()),
    }
    let mut v = p.clone();
    for n in 0..=50 {
        c.check(!v.is_nonnegative(), format!("A^{n} p is nonnegative"));
        v = apply(&a, &v).expect("dimensions agree");
    }
    c.note("A^N p has a negative entry for N <= 50");
    c.finish(2, "impossibility certificate")
}

/// Nonzero iff `i + j + N` is even.
fn parity_pattern(n: usize, dim: usize) -> Vec<Vec<bool>> {
    (0..dim).map(|i| (0..dim).map(|j| (i + j + n).is_multiple_of(2)).collect()).collect()
}

pub fn family_sweep(cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    for a in 1..=5u64 {
        for b in 1..=5u64 {
            let ctx = ctx(&[0, b, 0, a]);
            let m = matrix_for(&ctx, cfg);
            match boolean_cycle(&m, cfg.max_n) {
                Ok(cy) => {
                    c.check(cy.period == 2, format!("({a},{b}): pattern period {}", cy.period));
                    let pows = boolean_powers(&m, cy.start + 4);
                    for (n, pw) in pows.iter().enumerate().skip(cy.start) {
                        c.check(pw.rows() == parity_pattern(n, 4).as_slice(), format!("({a},{b}): A^{n} pattern"));
                    }
                }
                Err(e) => c.check(false, format!("({a},{b}): {e}")),
            }
            // -λ^3 + bλ + a in the basis λ^3, ..., 1
            let p = CoeffVector::from_i64(&[-1, 0, b as i64, a as i64]);
            match decide_nonneg_with(&m, &p, cfg.max_n) {
                Ok(cert) => c.check(
                    matches!(cert.kind, CertificateKind::Impossible(_)),
                    format!("({a},{b}): {}", cert.kind_name()),
                ),
                Err(e) => c.check(false, format!("({a},{b}): {e}")),
            }
        }
    }
    c.note("25 contexts: period 2 parity pattern, impossible");
    c.finish(3, "family sweep")
}

fn membership(v: &RootMembership) -> String {
    match v {
        RootMembership::Excluded => "excluded".into(),
        RootMembership::Member { c, d } => format!("{c} + {d}b"),
    }
}

pub fn sqrt_exclusion(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    for a in 1..=10u64 {
        for b in 1..=10u64 {
            match sqrt_membership_quadratic(a, b) {
                Ok(r) => c.check(r.excluded(), format!("({a},{b}): sqrt(b) = {}", membership(&r.verdict))),
                Err(e) => c.check(false, format!("({a},{b}): {e}")),
            }
            // n = 1 is the square root itself.
            for n in 2..=4 {
                match even_root_exclusion(a, b, n) {
                    Ok(r) => c.check(r.excluded(), format!("({a},{b}): b^(1/{}) = {}", 2 * n, membership(&r.verdict))),
                    Err(e) => c.check(false, format!("({a},{b},{n}): {e}")),
                }
            }
        }
    }
    c.note("no square or even root lies in the ring");
    c.finish(4, "square-root exclusion")
}

pub fn counterexample(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let f = match counterexample_map(1, 1, &Arrangement::standard(1, 1)) {
        Ok(f) => f,
        Err(e) => {
            c.check(false, e.to_string());
            return c.finish(5, "counterexample map");
        }
    };
    let g = f.context().clone();
    let gp = |k: i64| FieldElem::beta_pow(&g, k);
    let (zero, one) = (FieldElem::zero(&g), FieldElem::one(&g));
    let pp = f.to_partition_pair();
    c.check(pp.domain.points() == [zero.clone(), gp(3), gp(1), one.clone()], "domain breakpoints");
    c.check(pp.codomain.points() == [zero, gp(5), gp(1), one], "codomain breakpoints");
    // τ = γ^2
    c.check(f.slopes() == vec![gp(2), gp(-2), gp(0)], "slopes");
    match validate_membership(&f, &g) {
        Ok(r) => c.check(r.verdict, "not a member of its own group"),
        Err(e) => c.check(false, e.to_string()),
    }
    match validate_membership(&f, &tau_context()) {
        Ok(r) => {
            c.check(!r.verdict, "member of the golden-ratio group");
            let at_root = r.breakpoints.iter().find(|b| b.x == gp(1));
            c.check(at_root.is_some_and(|b| !b.x_ok), "breakpoint at the square root is not flagged");
            c.check(r.offending.contains(&gp(1)), "square root missing from the offending coordinates");
        }
        Err(e) => c.check(false, e.to_string()),
    }
    c.note("partitions, slopes and membership match");
    c.finish(5, "counterexample map")
}

pub fn tree_obstruction(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let q = quartic();
    let g = FieldElem::beta(&q);
    let p = Partition::new(&q, vec![FieldElem::zero(&q), g.clone(), FieldElem::one(&q)]).expect("increasing");
    match partition_to_tree(&p, 12) {
        Err(TreeError::Unrepresentable { breakpoint, .. }) => c.check(breakpoint == g, "wrong offending breakpoint"),
        other => c.check(false, format!("expected unrepresentable, got {other:?}")),
    }
    match enumerate_trees(&q, 12, 100_000) {
        Ok(trees) => {
            let odd = trees.iter().filter(|t| t.leaf_depths().iter().any(|d| d % 2 == 1)).count();
            c.check(odd == 0, format!("{odd} trees with an odd leaf depth"));
            c.note(format!("{} trees, all leaf depths even", trees.len()));
        }
        Err(e) => c.check(false, e.to_string()),
    }
    c.finish(6, "tree-pair obstruction")
}

pub fn ftau_relations(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let report = check_ftau_relations(4);
    match report.convention() {
        Some(conv) => c.note(format!("{} relations hold under {conv:?} only", report.checks.len())),
        None => c.check(false, "relations do not single out one composition convention"),
    }
    c.finish(7, "golden-ratio relations")
}

pub fn thompson_sanity(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let f = ctx(&[2]);
    let x0 = PlMap::from_rationals(&f, &[((0, 1), (0, 1)), ((1, 4), (1, 2)), ((1, 2), (3, 4)), ((1, 1), (1, 1))])
        .expect("increasing");
    let sq = PlMap::from_rationals(&f, &[((0, 1), (0, 1)), ((1, 8), (1, 2)), ((1, 4), (3, 4)), ((1, 2), (7, 8)), ((1, 1), (1, 1))])
        .expect("increasing");
    let m = x0.compose(&x0).expect("same context");
    c.check(m == sq, format!("x0 x0 = {m}"));
    let tp = TreePair::parse(&f, "(1,1)[(1,1),L]", "(1,1)[L,(1,1)]").expect("binary trees");
    c.check(tp.to_plmap() == x0, "pair does not give x0");
    match compose_pairs(&tp, &tp, DEFAULT_COMPOSE_BUDGET) {
        Ok(h) => c.check(h.to_plmap() == sq, "pair composition disagrees with map composition"),
        Err(e) => c.check(false, e.to_string()),
    }
    c.note("x0^2 agrees as maps and as tree pairs");
    c.finish(8, "Thompson group sanity")
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

pub fn caret_combinatorics(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let mut contexts = 0;
    for a in 1..=12u64 {
        for b in 0..=12 - a {
            let Ok(q) = validate_subdivision_u64(&[b, a]) else { continue };
            contexts += 1;
            match enumerate_carets(&q, DEFAULT_CARET_CAP) {
                Ok(s) => c.check(BigInt::from(s.len()) == binomial(a + b, a), format!("({a},{b}): {} shapes", s.len())),
                Err(e) => c.check(false, e.to_string()),
            }
        }
    }
    let tau = tau_context();
    let t1 = Tree::parse("(2,1)[L,(2,1)[L,L]]").expect("tree");
    let t2 = Tree::parse("(1,2)[(1,2)[L,L],L]").expect("tree");
    c.check(t1.leaf_depths() == [2, 3, 2] && t2.leaf_depths() == [2, 3, 2], "equitree depths");
    c.check(tree_to_partition(&tau, &t1) == tree_to_partition(&tau, &t2), "equitree partitions differ");
    let cubic = ctx(&[1, 0, 1]);
    let u1 = Tree::parse("(3,1)[L,(3,1)[(1,3)[L,L],(3,1)[L,L]]]").expect("tree");
    let u2 = Tree::parse("(1,3)[(1,3)[(1,3)[L,L],(3,1)[L,L]],L]").expect("tree");
    c.check(u1.fits(&cubic) && u2.fits(&cubic), "cubic trees use foreign shapes");
    c.check(u1.leaf_depths() == [3, 5, 7, 5, 3] && u2.leaf_depths() == [3, 5, 7, 5, 3], "cubic depths");
    c.note(format!("{contexts} quadratic contexts; both tree relations agree"));
    c.finish(9, "caret combinatorics")
}

fn random_tree(rng: &mut ChaCha8Rng, carets: usize) -> Tree {
    let shapes = [CaretShape(vec![1, 2]), CaretShape(vec![2, 1])];
    let mut t = Tree::Leaf;
    for _ in 0..carets {
        let leaf = rng.gen_range(0..t.leaves());
        t = t.expand_leaf(leaf, &shapes[rng.gen_range(0..2)]);
    }
    t
}

pub fn power_functors(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let tau = tau_context();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a75);
    for trial in 0..200 {
        let n = rng.gen_range(0..8);
        let tp = TreePair::new(&tau, random_tree(&mut rng, n), random_tree(&mut rng, n)).expect("equal leaves");
        for k in [2, 3] {
            let back = power_map_up(&tp, k).and_then(|u| power_map_down(&u, k));
            c.check(back.as_ref().is_ok_and(|b| *b == tp), format!("trial {trial}, k = {k}"));
        }
    }
    for k in [2, 3] {
        c.check(caret_bijection(&tau, k).unwrap_or(false), format!("shape bijection fails for k = {k}"));
    }
    c.note("200 pairs round-trip for k = 2, 3; shapes biject");
    c.finish(10, "power functors")
}

/// Whether `lo <= r <= hi` for the positive root `r` of `f`, given `f`
/// increasing on the interval.
fn brackets(lo: &BigRational, hi: &BigRational, f: impl Fn(&BigRational) -> BigRational) -> bool {
    f(lo) <= BigRational::zero() && f(hi) >= BigRational::zero()
}

type Bracket<'a> = Box<dyn Fn(&BigRational) -> BigRational + 'a>;

pub fn root_isolation(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    let width = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12)));
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    // Each reference root as the zero of an increasing function built from
    // its closed form: (2x+1)^2 = 5, (x+1)^2 = 2, (2x^2+1)^2 = 5.
    let cases: Vec<(Ctx, &str, Bracket<'_>)> = vec![
        (ctx(&[1, 1]), "(sqrt5-1)/2", Box::new(|x| { let y = &two * x + &one; &y * &y - BigRational::from_integer(5.into()) })),
        (ctx(&[2, 1]), "sqrt2-1", Box::new(|x| { let y = x + &one; &y * &y - &two })),
        (quartic(), "sqrt((sqrt5-1)/2)", Box::new(|x| { let y = &two * x * x + &one; &y * &y - BigRational::from_integer(5.into()) })),
    ];
    for (q, name, f) in &cases {
        let iv = q.root_interval().refine_to(q.poly_rat(), &width);
        c.check(iv.width() <= width, format!("{name}: interval too wide"));
        c.check(brackets(&iv.lo, &iv.hi, f), format!("{name}: not bracketed"));
    }
    let q = quartic();
    let gamma = FieldElem::beta(&q);
    match FieldElem::beta(&tau_context()).embed_power(&q, 2) {
        Ok(t) => c.check(&gamma * &gamma == t, "gamma^2 differs from tau"),
        Err(e) => c.check(false, e.to_string()),
    }
    c.note("three roots bracketed to 1e-12; gamma^2 = tau");
    c.finish(11, "root isolation")
}

pub fn presentation(_cfg: &AcceptanceConfig) -> CriterionResult {
    let mut c = Checks::new();
    match emit_presentation(1, 1, 3) {
        Ok(rels) => {
            let report = check_relations(&rels);
            c.check(report.all_hold(Convention::LeftToRight), "a relation fails");
            c.note(format!("{} relations verified", rels.len()));
        }
        Err(e) => c.check(false, e.to_string()),
    }
    match emit_presentation(2, 1, 3) {
        Err(TreeError::Undefined { a: 2, b: 1 }) => c.note("(2,1) refused"),
        other => c.check(false, format!("(2,1) should be refused, got {other:?}")),
    }
    c.finish(12, "presentation emission")
}

pub type Criterion = fn(&AcceptanceConfig) -> CriterionResult;

pub const CRITERIA: [Criterion; 12] = [
    matrix_fidelity,
    impossibility_certificate,
    family_sweep,
    sqrt_exclusion,
    counterexample,
    tree_obstruction,
    ftau_relations,
    thompson_sanity,
    caret_combinatorics,
    power_functors,
    root_isolation,
    presentation,
];

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|f| f(cfg)).collect()
}
