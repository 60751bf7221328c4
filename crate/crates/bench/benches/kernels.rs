//! Timings of the core kernels at desk scale.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use segal_lab::combinatorics::{gale_facets, segal_poset};
use segal_lab::hall::associativity_check;
use segal_lab::polytope::{below_order_check, enumerate_triangulations, FlipGraph};
use segal_lab::segal_sum::segal_check_sum;
use segal_lab::waldhausen::{
    check_functor, enumerate_classes, segal_functor, Construction, Shape, Tables, Variant, DEFAULT_BUDGET,
};
use segal_lab::{Backend, Side};

fn combinatorics(c: &mut Criterion) {
    c.bench_function("gale_facets n=8 d=4", |b| b.iter(|| gale_facets(black_box(8), black_box(4)).unwrap()));
    c.bench_function("segal_poset lower n=8 d=3", |b| b.iter(|| segal_poset(black_box(8), 3, Side::Lower).unwrap()));
}

fn polytopes(c: &mut Criterion) {
    let mut g = c.benchmark_group("polytopes");
    g.sample_size(10);
    g.bench_function("triangulations C(7,2)", |b| b.iter(|| enumerate_triangulations(black_box(7), 2).unwrap()));
    g.bench_function("triangulations C(6,3)", |b| b.iter(|| enumerate_triangulations(black_box(6), 3).unwrap()));
    g.bench_function("flip graph C(6,2)", |b| b.iter(|| FlipGraph::build(black_box(6), 2).unwrap()));
    g.bench_function("below order n=7 d=3", |b| b.iter(|| below_order_check(black_box(7), 3).unwrap()));
    g.finish();
}

fn waldhausen(c: &mut Criterion) {
    let mut g = c.benchmark_group("waldhausen");
    g.sample_size(10);
    let shape = Shape::grid(2, 4, Variant::Exact).unwrap();
    let t = Tables::new(Backend::Fq(2), 2, 1).unwrap();
    g.bench_function("classes S<2>_4 over F2, bound 2", |b| {
        b.iter(|| enumerate_classes(&shape, &t, 2, DEFAULT_BUDGET).unwrap())
    });
    let f = segal_functor(Construction::pair(1), None, 5, 2, Side::Lower).unwrap();
    g.bench_function("S<1> lower 2-Segal n=5 over F1, bound 3", |b| {
        b.iter(|| check_functor(&f, Backend::F1, 3, DEFAULT_BUDGET).unwrap())
    });
    let f = segal_functor(Construction::pair(2), None, 5, 4, Side::Upper).unwrap();
    g.bench_function("S<2> upper 4-Segal n=5 over F2, bound 2", |b| {
        b.iter(|| check_functor(&f, Backend::Fq(2), 2, DEFAULT_BUDGET).unwrap())
    });
    g.finish();
}

fn sums_and_hall(c: &mut Criterion) {
    let mut g = c.benchmark_group("sums_and_hall");
    g.sample_size(10);
    g.bench_function("S_+<2> lower 3-Segal n=4 over F1, bound 2", |b| {
        b.iter(|| segal_check_sum(Backend::F1, 2, black_box(4), 2, DEFAULT_BUDGET).unwrap())
    });
    g.bench_function("Hall associativity F2, dim 3", |b| {
        b.iter(|| associativity_check(Backend::Fq(2), black_box(3)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, combinatorics, polytopes, waldhausen, sums_and_hall);
criterion_main!(benches);
