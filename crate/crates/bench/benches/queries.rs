use confsel_bench::pretreatment_graph;
use confsel_core::adjustment::enumerate_minimal_sufficient_sets;
use confsel_core::blanket::{Blankets, DSepOracle, ReductionStart};
use confsel_core::dsep::d_separated;
use confsel_core::fixtures;
use confsel_core::testkit::dsep_bruteforce;
use confsel_core::VertexSet;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn dsep(c: &mut Criterion) {
    let mut group = c.benchmark_group("dsep");
    for n in [8, 10, 12] {
        let g = pretreatment_graph(n, 0.3, 7);
        let (a, y) = (VertexSet::singleton(g.treatment()), VertexSet::singleton(g.outcome()));
        let given = g.covariates();
        group.bench_with_input(BenchmarkId::new("reachability", n), &g, |b, g| {
            b.iter(|| d_separated(g, black_box(&a), &y, &given).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("path-enumeration", n), &g, |b, g| {
            b.iter(|| dsep_bruteforce(g, black_box(&a), &y, &given).unwrap())
        });
    }
    group.finish();
}

fn selection(c: &mut Criterion) {
    let gc = fixtures::gc();
    let s = gc.pretreatment_covariates();
    c.bench_function("minimal-sets/fig2", |b| {
        b.iter(|| enumerate_minimal_sufficient_sets(&gc, black_box(&s), 20).unwrap())
    });
    let g = pretreatment_graph(14, 0.3, 3);
    let s = g.covariates();
    let oracle = DSepOracle::new(&g);
    c.bench_function("reduce-alternating/14", |b| {
        b.iter(|| {
            Blankets::new(&oracle, g.treatment(), g.outcome())
                .reduce_alternating(ReductionStart::TreatmentFirst, black_box(&s))
                .unwrap()
        })
    });
}

criterion_group!(benches, dsep, selection);
criterion_main!(benches);
