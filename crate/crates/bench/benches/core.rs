use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mapcone_bench::{maximal_ideal_power, squarefree_veronese, staircase};
use mapcone_core::dg::{dg_check, taylor_dg, taylor_via_star};
use mapcone_core::resolution::{betti_oracle, iterated_cone_resolution, lq_resolution, verify_complex};

fn resolution(c: &mut Criterion) {
    let cube = maximal_ideal_power(3, 3);
    let veronese = squarefree_veronese(5, 2);
    c.bench_function("lq_resolution (x1,x2,x3)^3", |b| b.iter(|| lq_resolution(black_box(&cube))));
    c.bench_function("lq_resolution squarefree veronese 5,2", |b| {
        b.iter(|| lq_resolution(black_box(&veronese)))
    });
    c.bench_function("iterated_cone squarefree veronese 5,2", |b| {
        b.iter(|| iterated_cone_resolution(black_box(&veronese)))
    });
    let f = lq_resolution(&cube).unwrap();
    c.bench_function("verify_complex (x1,x2,x3)^3", |b| b.iter(|| verify_complex(black_box(&f))));
    c.bench_function("betti_oracle (x1,x2,x3)^3", |b| b.iter(|| betti_oracle(black_box(&cube))));
}

fn dg(c: &mut Criterion) {
    let gens = staircase(4);
    c.bench_function("taylor_dg + dg_check staircase 4", |b| {
        b.iter(|| dg_check(&taylor_dg(black_box(&gens)).unwrap()))
    });
    c.bench_function("taylor_via_star staircase 4", |b| b.iter(|| taylor_via_star(black_box(&gens))));
}

criterion_group!(benches, resolution, dg);
criterion_main!(benches);
