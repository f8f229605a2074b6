use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use betaforge_bench::{golden, quartic};
use betaforge_core::exactnum::FieldElem;
use betaforge_core::plmaps::{ftau_generator, GenKind};
use betaforge_core::representability::{decide_nonneg, CoeffVector, DEFAULT_MAX_N};
use betaforge_core::subdivision::{enumerate_carets, validate_subdivision_u64};
use betaforge_core::treepairs::{
    check_ftau_relations, compose_pairs, count_trees, ftau_treepair, reduce, DEFAULT_COMPOSE_BUDGET,
};

fn exactnum(c: &mut Criterion) {
    let q = quartic();
    let x = &FieldElem::beta_pow(&q, 7) + &FieldElem::from_int(&q, 3);
    let y = FieldElem::beta_pow(&q, -5);
    c.bench_function("field_mul_quartic", |b| b.iter(|| black_box(&x) * black_box(&y)));
    c.bench_function("field_inverse_quartic", |b| b.iter(|| black_box(&x).inverse().unwrap()));
    c.bench_function("isolate_root_quartic", |b| {
        b.iter(|| validate_subdivision_u64(black_box(&[0, 1, 0, 1])).unwrap())
    });
}

fn subdivision(c: &mut Criterion) {
    let ctx = validate_subdivision_u64(&[2, 2, 2]).unwrap();
    c.bench_function("enumerate_carets_222", |b| b.iter(|| enumerate_carets(black_box(&ctx), 10_000).unwrap()));
}

fn representability(c: &mut Criterion) {
    let q = quartic();
    let p = CoeffVector::from_i64(&[-1, 0, 1, 1]);
    c.bench_function("decide_nonneg_quartic", |b| b.iter(|| decide_nonneg(&q, black_box(&p), DEFAULT_MAX_N).unwrap()));
}

fn plmaps(c: &mut Criterion) {
    let f = ftau_generator(GenKind::X, 3);
    let g = ftau_generator(GenKind::Y, 1);
    c.bench_function("plmap_compose_ftau", |b| b.iter(|| black_box(&f).compose(black_box(&g)).unwrap()));
}

fn treepairs(c: &mut Criterion) {
    let x = ftau_treepair(GenKind::X, 2);
    let y = ftau_treepair(GenKind::Y, 0);
    let xy = compose_pairs(&x, &y, DEFAULT_COMPOSE_BUDGET).unwrap();
    c.bench_function("treepair_compose_ftau", |b| {
        b.iter(|| compose_pairs(black_box(&x), black_box(&y), DEFAULT_COMPOSE_BUDGET).unwrap())
    });
    c.bench_function("treepair_reduce_ftau", |b| b.iter(|| reduce(black_box(&xy))));
    let g = golden();
    c.bench_function("count_trees_golden_24", |b| b.iter(|| count_trees(black_box(&g), 24)));
    let q = quartic();
    c.bench_function("count_trees_quartic_12", |b| b.iter(|| count_trees(black_box(&q), 12)));
    let mut group = c.benchmark_group("relations");
    group.sample_size(10);
    group.bench_function("check_ftau_relations_3", |b| b.iter(|| check_ftau_relations(black_box(3))));
    group.finish();
}

criterion_group!(benches, exactnum, subdivision, representability, plmaps, treepairs);
criterion_main!(benches);
