use cosetrepair::oracle::brute_dim;
use cosetrepair::repair::repair_with_plan;
use cosetrepair::{build_plan, enumerate_cosets, gw_max_k, FieldCtx};
use cosetrepair_bench::{erased_codeword, FIELDS};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn construct(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_field");
    for &(label, p, m, t) in FIELDS {
        group.bench_function(label, |b| {
            b.iter(|| FieldCtx::new(black_box(p), m, t).unwrap())
        });
    }
    group.finish();
}

fn dimension(c: &mut Criterion) {
    let mut group = c.benchmark_group("dim_w");
    for &(label, p, m, t) in FIELDS {
        let ctx = FieldCtx::new(p, m, t).unwrap();
        let k = gw_max_k(&ctx) / 4 + 1;
        group.bench_with_input(BenchmarkId::new("cosets", label), &k, |b, &k| {
            b.iter(|| {
                enumerate_cosets(ctx.q(), ctx.t())
                    .dim_w(black_box(k))
                    .unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("oracle", label), &k, |b, &k| {
            b.iter(|| brute_dim(&ctx, black_box(k)).unwrap())
        });
    }
    group.finish();
}

fn repair(c: &mut Criterion) {
    let mut group = c.benchmark_group("repair");
    for &(label, p, m, t) in FIELDS {
        let ctx = FieldCtx::new(p, m, t).unwrap();
        let cc = enumerate_cosets(ctx.q(), ctx.t());
        for k in [1, gw_max_k(&ctx) / 2, gw_max_k(&ctx)] {
            let fc = cc.filter(k).unwrap();
            let plan = build_plan(&ctx, &fc, 0).unwrap();
            let cw = erased_codeword(&ctx, k, 42);
            group.bench_with_input(
                BenchmarkId::new(label, format!("k{k}_d{}", plan.d())),
                &cw,
                |b, cw| b.iter(|| repair_with_plan(&ctx, &plan, black_box(cw)).unwrap()),
            );
        }
    }
    group.finish();
}

fn plan(c: &mut Criterion) {
    let ctx = FieldCtx::new(2, 3, 2).unwrap();
    let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(10).unwrap();
    c.bench_function("build_plan/gf64_gf8_k10", |b| {
        b.iter(|| build_plan(&ctx, &fc, black_box(5)).unwrap())
    });
}

criterion_group!(benches, construct, dimension, plan, repair);
criterion_main!(benches);
