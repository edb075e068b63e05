use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use sksphere::kahler::PointResiduals;
use sksphere::sphere::{fd_potential_hessian, immerse, potential_fd_config};
use sksphere::{certify, BundledCase, CertifyOptions, DerivativeMode, Geometry, Prepotential, Screening};

fn case(name: &str) -> (&'static BundledCase, Prepotential) {
    let case = BundledCase::by_name(name).unwrap();
    (case, case.prepotential().unwrap())
}

fn mid(case: &BundledCase) -> Vec<Complex64> {
    (0..case.arity)
        .map(|k| Complex64::new(0.5 * (case.x.0 + case.x.1) + 0.1 * k as f64, 0.5 * (case.v.0 + case.v.1)))
        .collect()
}

fn parse_and_jet(c: &mut Criterion) {
    let src = "(i/6)*(z1^3 + z2^3) + exp(z1*z2) + (i/2)*(z1^2 + z2^2)";
    c.bench_function("parse", |b| b.iter(|| Prepotential::parse(black_box(src), 2).unwrap()));
    let f = Prepotential::parse(src, 2).unwrap();
    let z = [Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.7)];
    c.bench_function("jet", |b| b.iter(|| f.jet(black_box(&z)).unwrap()));
}

fn residuals(c: &mut Criterion) {
    let mut group = c.benchmark_group("point_residuals");
    for name in ["cubic", "cubic_pair"] {
        let (case, f) = case(name);
        let z = mid(case);
        for (label, mode) in [("fd", DerivativeMode::default()), ("exact", DerivativeMode::Exact)] {
            let geom = Geometry::with_mode(&f, mode);
            let p = geom.point(&z).unwrap();
            group.bench_with_input(BenchmarkId::new(name, label), &p, |b, p| {
                b.iter(|| PointResiduals::evaluate(&geom, p).unwrap())
            });
        }
    }
    group.finish();
}

fn potential(c: &mut Criterion) {
    let (case, f) = case("exponential");
    let z = mid(case);
    let cfg = potential_fd_config();
    c.bench_function("fd_potential_hessian/exponential", |b| {
        b.iter(|| fd_potential_hessian(&f, black_box(&z), &cfg).unwrap())
    });
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, n) in [("exponential", 16), ("cubic_pair", 4)] {
        let (case, f) = case(name);
        let grid = case.grid(n).unwrap();
        let points: Vec<_> = (0..grid.len()).map(|i| grid.z(i)).collect();
        let geom = Geometry::new(&f);
        let opts = CertifyOptions::default();
        group.bench_function(BenchmarkId::new("certify", name), |b| b.iter(|| certify(&geom, &points, &opts)));
        let base = mid(case);
        group.bench_function(BenchmarkId::new("immerse", name), |b| {
            b.iter(|| immerse(&f, &grid, &base, Screening::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, parse_and_jet, residuals, potential, sweeps);
criterion_main!(benches);
