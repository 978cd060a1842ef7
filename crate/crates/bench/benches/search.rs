use criterion::{criterion_group, criterion_main, Criterion};
use unital_bench::natural_closure;
use unital_core::grp::Geometry;
use unital_core::para::enumerate_parallelisms;
use unital_core::{iso, unital};

fn parallelisms(c: &mut Criterion) {
    let geo = Geometry::of_order(4).unwrap();
    c.bench_function("enumerate parallelisms q=4", |b| b.iter(|| enumerate_parallelisms(&geo, 0).unwrap().len()));
}

fn family_search(c: &mut Criterion) {
    let geo = Geometry::of_order(4).unwrap();
    let s = geo.g.cyclic_s();
    c.bench_function("long-block families q=4", |b| b.iter(|| unital::search_d_sets(&geo, &s, 0).unwrap().len()));
}

fn automorphisms(c: &mut Criterion) {
    let d = natural_closure(3);
    c.bench_function("automorphisms of a closure q=3", |b| b.iter(|| iso::automorphisms(&d).unwrap().order));
    let d = natural_closure(4);
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("automorphisms of a closure q=4", |b| b.iter(|| iso::automorphisms(&d).unwrap().order));
    g.finish();
}

criterion_group!(benches, parallelisms, family_search, automorphisms);
criterion_main!(benches);
