use criterion::{criterion_group, criterion_main, Criterion};
use fouranchor_core::catalog;
use fouranchor_core::poly::{resultant, univariate_roots, CPoly};
use fouranchor_core::sysbuild::build_reduced_system;
use fouranchor_core::{solve, Configuration, Point2};
use num_complex::Complex64;
use num_rational::BigRational;

fn generic() -> Configuration {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    Configuration::new(
        [(0, 0), (3, 1), (-1, 2), (2, -3)].map(|(x, y)| Point2::from_ints(x, y)),
        [q(1, 2), q(3, 4), q(5, 3), q(2, 1)],
    )
}

fn bench_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    g.bench_function("square", |b| b.iter(|| solve(&catalog::square())));
    g.bench_function("collinear", |b| b.iter(|| solve(&catalog::collinear())));
    g.bench_function("generic", |b| b.iter(|| solve(&generic())));
    g.finish();
}

fn bench_elimination(c: &mut Criterion) {
    let rs = build_reduced_system(&generic()).unwrap();
    let mut g = c.benchmark_group("elimination");
    g.sample_size(10);
    g.bench_function("reduced_system", |b| b.iter(|| build_reduced_system(&generic()).unwrap()));
    g.bench_function("resultant_deg8_deg12", |b| {
        b.iter(|| resultant(&rs.det_constraint, &rs.circle_constraint, "y2").unwrap())
    });
    g.finish();
}

fn bench_roots(c: &mut Criterion) {
    let roots: Vec<Complex64> = (0..24).map(|j| Complex64::from_polar(1.0 + j as f64 / 24.0, j as f64 * 0.7)).collect();
    let p = CPoly::from_roots(&roots);
    c.bench_function("roots_degree24", |b| b.iter(|| univariate_roots(&p).unwrap()));
}

criterion_group!(benches, bench_solve, bench_elimination, bench_roots);
criterion_main!(benches);
