use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use hermite_bench::{cube_root_four, ex_ok, exercise_matrix, simplest_cubic};
use hermite_core::dirichlet::{answer_q1, assemble, DirichletOptions};
use hermite_core::engines::{
    apd_expand, euclid_expand_rational, jacobi_perron_expand, monte_carlo_frequencies,
    sin2_expand, ApdOptions, Sin2Options,
};
use hermite_core::nfield::max_bits;
use hermite_core::RunLimits;
use num_rational::BigRational;

fn expansions(c: &mut Criterion) {
    let mut g = c.benchmark_group("expand");
    let (p, q) = (BigRational::from_integer(832040.into()), BigRational::from_integer(514229.into()));
    g.bench_function("euclid_fibonacci", |b| {
        b.iter(|| euclid_expand_rational(black_box(&p), black_box(&q), &RunLimits::default()).unwrap())
    });
    let sys = ex_ok();
    g.bench_function("jacobi_perron_ex_ok", |b| {
        b.iter(|| jacobi_perron_expand(black_box(&sys), &RunLimits::default()).unwrap())
    });
    let cbrt4 = cube_root_four();
    g.bench_function("jacobi_perron_cbrt4_40", |b| {
        b.iter(|| jacobi_perron_expand(black_box(&cbrt4), &RunLimits::steps(40)).unwrap())
    });
    g.bench_function("apd_cbrt4", |b| {
        b.iter(|| apd_expand(black_box(&cbrt4), &ApdOptions::default(), &RunLimits::default()).unwrap())
    });
    let real = simplest_cubic();
    g.bench_function("sin2_simplest_cubic", |b| {
        b.iter(|| sin2_expand(black_box(&real), &Sin2Options::default(), &RunLimits::steps(300)).unwrap())
    });
    g.finish();
}

fn matrices(c: &mut Criterion) {
    let mut g = c.benchmark_group("dirichlet");
    g.sample_size(10);
    let sys = ex_ok();
    let e = jacobi_perron_expand(&sys, &RunLimits::default()).unwrap();
    g.bench_function("assemble_ex_ok", |b| b.iter(|| assemble(black_box(&e), &sys, max_bits()).unwrap()));
    let a = exercise_matrix();
    g.bench_function("q1_exercise", |b| {
        b.iter(|| answer_q1(black_box(&a), &DirichletOptions::default()).unwrap())
    });
    g.finish();
}

fn statistics(c: &mut Criterion) {
    let mut g = c.benchmark_group("stats");
    g.sample_size(10);
    g.bench_function("monte_carlo_1000x100", |b| {
        b.iter(|| monte_carlo_frequencies(1000, 100, 512, black_box(0)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, expansions, matrices, statistics);
criterion_main!(benches);
