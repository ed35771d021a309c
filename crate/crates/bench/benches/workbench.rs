//! Criterion benchmarks over the main workbench operations: type
//! synthesis, normalization, model verification, equational checking,
//! and the Hilbert translation.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use modalc_core::gen::{GenConfig, TermGen};
use modalc_core::hilbert::{check_hilbert, translate};
use modalc_core::semantics::{verify_model, FiniteModel, FunctorSpec};
use modalc_core::syntax::{DualContext, Term, TypeExpr};
use modalc_core::typecheck::{infer, SystemId};
use modalc_core::{eq_terms, normalize, parse_judgment, Relation};

fn typed_corpus(sys: SystemId, n: usize, size: usize) -> Vec<(DualContext, Term, TypeExpr)> {
    let mut g = TermGen::new(0xBE6C, GenConfig { max_term_size: size, ..GenConfig::default() });
    (0..n).map(|_| g.random_typed(sys)).collect()
}

fn bench_infer(c: &mut Criterion) {
    let mut group = c.benchmark_group("infer");
    for sys in [SystemId::K, SystemId::K4, SystemId::S4, SystemId::GL] {
        let corpus = typed_corpus(sys, 64, 60);
        group.bench_function(sys.name(), |b| {
            b.iter(|| {
                for (ctx, term, _) in &corpus {
                    black_box(infer(sys, ctx, term).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn bench_normalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("normalize");
    let corpus = typed_corpus(SystemId::S4, 64, 60);
    group.bench_function("plain", |b| {
        b.iter(|| {
            for (_, term, _) in &corpus {
                black_box(normalize(term, Relation::Plain, 10_000).unwrap());
            }
        })
    });
    group.bench_function("cc", |b| {
        b.iter(|| {
            for (_, term, _) in &corpus {
                black_box(normalize(term, Relation::Cc, 10_000).unwrap());
            }
        })
    });
    group.finish();
}

fn bench_verify_model(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify-model");
    group.sample_size(10);
    for (functor, sys) in [
        (FunctorSpec::Identity, SystemId::S4),
        (FunctorSpec::Diagonal, SystemId::K4),
    ] {
        let model = FiniteModel::new(functor);
        group.bench_function(format!("{}-{}", functor.name(), sys.name()), |b| {
            b.iter(|| black_box(verify_model(&model, sys).unwrap()))
        });
    }
    group.finish();
}

fn bench_eq(c: &mut Criterion) {
    let j = parse_judgment("; x:[]p |- let box u = x in box u").unwrap();
    let rhs = modalc_core::parse_term("x").unwrap();
    let ty = modalc_core::parse_type("[]p").unwrap();
    c.bench_function("eq/box-eta", |b| {
        b.iter(|| black_box(eq_terms(SystemId::K, &j.ctx, &j.term, &rhs, &ty).unwrap()))
    });
}

fn bench_translate(c: &mut Criterion) {
    let mut group = c.benchmark_group("translate");
    let cases = [
        (SystemId::K, "; |- \\f:[](p -> q). \\x:[]p. let box g = f in let box a = x in box (g a)"),
        (SystemId::K4, "; |- \\x:[]p. let box u = x in box box u"),
        (SystemId::GL, "; |- \\f:[]([]p -> p). let box g = f in fix z:[]p. g z"),
    ];
    for (sys, src) in cases {
        let j = parse_judgment(src).unwrap();
        let d = infer(sys, &j.ctx, &j.term).unwrap();
        group.bench_function(sys.name(), |b| {
            b.iter_batched(
                || d.clone(),
                |d| {
                    let t = translate(sys, &d).unwrap();
                    check_hilbert(t.logic, &t.assumptions, &t.goal, &t.proof).unwrap();
                    black_box(t)
                },
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_infer,
    bench_normalize,
    bench_verify_model,
    bench_eq,
    bench_translate
);
criterion_main!(benches);
