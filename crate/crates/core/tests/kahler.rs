use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sksphere::kahler::*;
use sksphere::numerics::{hermitian_signature, signature, FdConfig, Mat, Signature, Tensor3};
use sksphere::{BundledCase, Prepotential, BUNDLED};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn prep(src: &str, m: usize) -> Prepotential {
    Prepotential::parse(src, m).unwrap()
}

fn random_points(case: &BundledCase, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..case.arity)
                .map(|_| c(rng.gen_range(case.x.0..=case.x.1), rng.gen_range(case.v.0..=case.v.1)))
                .collect()
        })
        .collect()
}

#[test]
fn hermitian_form_matches_symplectic_oracle() {
    // h_ij = i Ω(φ_*e_i, τ φ_*e_j), φ_*e_i = (e_i, column i of Hess F),
    // Ω((z, w), (z', w')) = Σ z_k w'_k − w_k z'_k.
    for (k, case) in BUNDLED.iter().enumerate() {
        let f = case.prepotential().unwrap();
        let m = case.arity;
        for z in random_points(case, 100, 7 + k as u64) {
            let p = SKPoint::new(&f, &z).unwrap();
            let h = p.hermitian_form();
            let push = |i: usize| -> (Vec<Complex64>, Vec<Complex64>) {
                let e = (0..m).map(|r| c((r == i) as u8 as f64, 0.0)).collect();
                let w = (0..m).map(|r| p.jet().d2(r, i)).collect();
                (e, w)
            };
            for i in 0..m {
                for j in 0..m {
                    let (z1, w1) = push(i);
                    let (z2, w2) = push(j);
                    let omega: Complex64 = (0..m).map(|r| z1[r] * w2[r].conj() - w1[r] * z2[r].conj()).sum();
                    let oracle = c(0.0, 1.0) * omega;
                    assert!((oracle - h[i * m + j]).norm() <= 1e-12, "{}: {oracle} vs {}", case.name, h[i * m + j]);
                }
            }
        }
    }
}

#[test]
fn hermitian_form_fixtures() {
    let p = SKPoint::new(&prep("z1^3/6", 1), &[c(1.0, 2.0)]).unwrap();
    assert!((p.hermitian_form()[0] - c(4.0, 0.0)).norm() <= 1e-12);
    let p = SKPoint::new(&prep("(i/2)*z1^2", 1), &[c(0.3, -0.4)]).unwrap();
    assert!((p.hermitian_form()[0] - c(2.0, 0.0)).norm() <= 1e-12);
    let p = SKPoint::new(&prep("z1*z2 + (i/2)*(z1^2+z2^2)", 2), &[c(0.1, 0.2), c(-0.3, 0.5)]).unwrap();
    let h = p.hermitian_form();
    for (i, v) in h.iter().enumerate() {
        let expect = if i == 0 || i == 3 { 2.0 } else { 0.0 };
        assert!((v - c(expect, 0.0)).norm() <= 1e-12);
    }
}

#[test]
fn ambient_form_has_split_signature() {
    for m in 1..=4 {
        let h = ambient_hermitian_form(m);
        let n = 2 * m;
        for a in 0..n {
            for b in 0..n {
                assert_eq!(h[a * n + b], h[b * n + a].conj());
            }
        }
        assert_eq!(hermitian_signature(&h, n, 1e-12).unwrap(), Signature::new(m, m));
        // Independent count: each (e_k, f_k) block is [[0, i], [−i, 0]] with
        // eigenvalues ±1, so the real embedding has exactly 2m positive and 2m negative.
        let mut real = DMatrix::zeros(2 * n, 2 * n);
        for a in 0..n {
            for b in 0..n {
                real[(a, b)] = h[a * n + b].re;
                real[(a + n, b + n)] = h[a * n + b].re;
                real[(a, b + n)] = -h[a * n + b].im;
                real[(a + n, b)] = h[a * n + b].im;
            }
        }
        let evs = real.symmetric_eigen().eigenvalues;
        assert_eq!(evs.iter().filter(|e| (**e - 1.0).abs() < 1e-12).count(), 2 * m);
        assert_eq!(evs.iter().filter(|e| (**e + 1.0).abs() < 1e-12).count(), 2 * m);
    }
}

fn fd_hessian_from_gradient(f: &Prepotential, z: &[Complex64]) -> Vec<Complex64> {
    let m = z.len();
    let h = 1e-5;
    let mut out = vec![c(0.0, 0.0); m * m];
    for j in 0..m {
        let mut plus = z.to_vec();
        let mut minus = z.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let gp = f.gradient_hessian(&plus).unwrap().0;
        let gm = f.gradient_hessian(&minus).unwrap().0;
        for i in 0..m {
            out[i * m + j] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    out
}

#[test]
fn lagrangian_certificate() {
    let f = prep("z1^3/6", 1);
    let p = SKPoint::new(&f, &[c(1.0, 1.0)]).unwrap();
    assert_eq!(p.lagrangian_residual(), 0.0);
    let fd = fd_hessian_from_gradient(&f, &[c(1.0, 1.0)]);
    assert!((fd[0] - p.jet().d2(0, 0)).norm() <= 1e-8);

    let f = prep("z1*z2^3", 2);
    let z = [c(1.0, 1.0), c(2.0, -1.0)];
    let p = SKPoint::new(&f, &z).unwrap();
    assert_eq!(p.lagrangian_residual(), 0.0);
    let fd = fd_hessian_from_gradient(&f, &z);
    assert!(lagrangian_residual_of(&fd, 2) <= 1e-8);
    for i in 0..2 {
        for j in 0..2 {
            assert!((fd[i * 2 + j] - p.jet().d2(i, j)).norm() <= 1e-8 * p.jet().d2(i, j).norm().max(1.0));
        }
    }
}

#[test]
fn nondegeneracy_and_signature_of_b() {
    let cubic = prep("z1^3/6", 1);
    assert!(!SKPoint::new(&cubic, &[c(0.7, 0.0)]).unwrap().is_nondegenerate());
    let p = SKPoint::new(&prep("(i/2)*z1^2", 1), &[c(0.3, 0.1)]).unwrap();
    assert_eq!(p.nondegenerate(), (true, Some(Signature::new(1, 0))));
    let p = SKPoint::new(&prep("(-i/2)*z1^2", 1), &[c(0.3, 0.1)]).unwrap();
    assert_eq!(p.nondegenerate(), (true, Some(Signature::new(0, 1))));
}

// Christoffels of ∇ from second differences of the affine chart map q(ξ).
fn fd_christoffels(f: &Prepotential, z: &[Complex64], kind: ConnectionKind) -> Tensor3 {
    let m = z.len();
    let n = 2 * m;
    let chart = |xi: &[f64]| -> Vec<f64> {
        let zz = chart_to_z(xi);
        let grad = f.gradient_hessian(&zz).unwrap().0;
        match kind {
            ConnectionKind::Nabla => xi[..m].iter().copied().chain(grad.iter().map(|w| w.re)).collect(),
            ConnectionKind::NablaJ => xi[m..].iter().copied().chain(grad.iter().map(|w| w.im)).collect(),
        }
    };
    let xi0 = z_to_chart(z);
    let h = 1e-4;
    let shift = |d: &[(usize, f64)]| {
        let mut p = xi0.clone();
        for (k, s) in d {
            p[*k] += s;
        }
        chart(&p)
    };
    let mut jac = Mat::zeros(n, n);
    for e in 0..n {
        let (a, b) = (shift(&[(e, h)]), shift(&[(e, -h)]));
        for d in 0..n {
            jac[(d, e)] = (a[d] - b[d]) / (2.0 * h);
        }
    }
    let tinv = jac.try_inverse().unwrap();
    let mut gamma = Tensor3::zeros(n);
    for b in 0..n {
        for cc in 0..n {
            let pp = shift(&[(b, h), (cc, h)]);
            let pm = shift(&[(b, h), (cc, -h)]);
            let mp = shift(&[(b, -h), (cc, h)]);
            let mm = shift(&[(b, -h), (cc, -h)]);
            let second: Vec<f64> = (0..n).map(|d| (pp[d] - pm[d] - mp[d] + mm[d]) / (4.0 * h * h)).collect();
            for a in 0..n {
                let v: f64 = (0..n).map(|d| tinv[(a, d)] * second[d]).sum();
                gamma.set(a, b, cc, v);
            }
        }
    }
    gamma
}

#[test]
fn christoffels_against_chart_oracle() {
    let cases = [("z1^3/6", 1, vec![c(0.4, 1.3)]), ("exp(z1)+(i/2)*z1^2", 1, vec![c(0.2, 0.6)]), (
        "(i/6)*(z1^3+z2^3)+(i/2)*(z1^2+z2^2)",
        2,
        vec![c(0.5, 0.2), c(0.1, -0.4)],
    )];
    for (src, m, z) in cases {
        let f = prep(src, m);
        let p = SKPoint::new(&f, &z).unwrap();
        for kind in [ConnectionKind::Nabla, ConnectionKind::NablaJ] {
            let exact = christoffels(kind, &p).unwrap().gamma;
            let fd = fd_christoffels(&f, &z, kind);
            for (a, b) in exact.as_slice().iter().zip(fd.as_slice()) {
                assert!((a - b).abs() <= 1e-5, "{src} {kind:?}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn conjugacy_holds_and_control_fails() {
    for case in &BUNDLED {
        let f = case.prepotential().unwrap();
        let geom = Geometry::new(&f);
        for z in random_points(case, 20, 11) {
            let frame = geom.frame(&geom.point(&z).unwrap()).unwrap();
            assert!(conjugacy_residual(&frame) <= 1e-6, "{}", case.name);
        }
    }
    let f = prep("z1^3/6", 1);
    let geom = Geometry::new(&f);
    let frame = geom.frame(&geom.point(&[c(0.0, 1.0)]).unwrap()).unwrap();
    assert!(conjugacy_residual(&frame) <= 1e-8);
    let control = conjugacy_residual_of(&frame.metric, &frame.d_metric, &frame.nabla.gamma, &frame.nabla.gamma);
    assert!(control >= 0.5, "control {control}");
}

#[test]
fn special_conditions_and_perturbed_control() {
    let f = prep("z1^3/6", 1);
    let geom = Geometry::new(&f);
    let case = BundledCase::by_name("cubic").unwrap();
    for z in random_points(case, 50, 3) {
        let frame = geom.frame(&geom.point(&z).unwrap()).unwrap();
        let (r1, r2) = special_residuals(&frame);
        assert!(r1 <= 1e-6 && r2 <= 1e-6, "{r1} {r2}");
    }
    let q = prep("(i/2)*z1^2", 1);
    let geom = Geometry::new(&q);
    let mut frame = geom.frame(&geom.point(&[c(0.2, 0.3)]).unwrap()).unwrap();
    assert_eq!(special_residuals(&frame), (0.0, 0.0));
    frame.nabla.gamma.add(0, 0, 0, 0.1);
    let (_, r2) = special_residuals(&frame);
    assert!(r2 >= 0.05, "r2 {r2}");
}

fn rotation(theta: f64) -> Mat {
    let mut r = Mat::identity(4, 4);
    r[(0, 0)] = theta.cos();
    r[(0, 1)] = -theta.sin();
    r[(1, 0)] = theta.sin();
    r[(1, 1)] = theta.cos();
    r
}

// J₀ conjugated by a rotation of the (x¹, x²) plane by angle x¹·v².
fn twisted_j(xi: &[f64]) -> Mat {
    let j0 = sksphere::sphere::standard_complex_structure(2);
    let r = rotation(xi[0] * xi[3]);
    &r * j0 * r.transpose()
}

#[test]
fn nijenhuis_vanishes_and_control_detects() {
    for case in &BUNDLED {
        let f = case.prepotential().unwrap();
        let geom = Geometry::new(&f);
        for z in random_points(case, 20, 5) {
            let frame = geom.frame(&geom.point(&z).unwrap()).unwrap();
            assert!(nijenhuis(&frame) <= 1e-6, "{}", case.name);
        }
    }
    let xi = [0.7, -0.2, 0.4, 0.9];
    let j = twisted_j(&xi);
    assert!((&j * &j + Mat::identity(4, 4)).amax() < 1e-14);
    let h = 1e-6;
    let mut dj = Tensor3::zeros(4);
    for b in 0..4 {
        let mut p = xi;
        let mut q = xi;
        p[b] += h;
        q[b] -= h;
        let d = (twisted_j(&p) - twisted_j(&q)) / (2.0 * h);
        for a in 0..4 {
            for cc in 0..4 {
                dj.set(b, a, cc, d[(a, cc)]);
            }
        }
    }
    let control = nijenhuis_of(&j, &dj);
    assert!(control >= 1e-2, "control {control}");
}

#[test]
fn both_connections_flat_and_torsion_free() {
    for case in &BUNDLED {
        let f = case.prepotential().unwrap();
        let geom = Geometry::new(&f);
        for z in random_points(case, 20, 13) {
            let frame = geom.frame(&geom.point(&z).unwrap()).unwrap();
            for kind in [ConnectionKind::Nabla, ConnectionKind::NablaJ] {
                let (t, r) = curvature_torsion(&frame, kind);
                assert!(t <= 1e-5 && r <= 1e-5, "{} {kind:?}: {t} {r}", case.name);
            }
        }
    }
}

#[test]
fn levi_civita_is_a_curved_control() {
    let f = prep("z1^3/6", 1);
    let geom = Geometry::new(&f);
    let p = geom.point(&[c(0.0, 1.0)]).unwrap();
    let frame = geom.frame(&p).unwrap();
    let lc = levi_civita_curvature(&geom, &p).unwrap();
    assert!(curvature_residual(&lc.gamma, &fd_levi_civita_derivatives(&f, &p)) > 1e-2);
    let s = shape_tensor_of(&frame.metric, &lc.gamma, &fd_levi_civita_derivatives(&f, &p)).unwrap();
    assert!(s.max_abs() > 1e-2);
}

fn fd_levi_civita_derivatives(f: &Prepotential, p: &SKPoint) -> Vec<Tensor3> {
    let xi = p.chart();
    let h = 1e-5;
    (0..xi.len())
        .map(|e| {
            let mut a = xi.clone();
            let mut b = xi.clone();
            a[e] += h;
            b[e] -= h;
            let ga = levi_civita_field(&SKPoint::at_chart(f, &a).unwrap()).unwrap();
            let gb = levi_civita_field(&SKPoint::at_chart(f, &b).unwrap()).unwrap();
            let n = ga.dim();
            Tensor3::from_vec(n, ga.as_slice().iter().zip(gb.as_slice()).map(|(x, y)| (x - y) / (2.0 * h)).collect())
        })
        .collect()
}

#[test]
fn shape_tensor_vanishes() {
    for case in &BUNDLED {
        let f = case.prepotential().unwrap();
        let geom = Geometry::new(&f);
        for z in random_points(case, 20, 17) {
            let frame = geom.frame(&geom.point(&z).unwrap()).unwrap();
            let s = shape_tensor(&frame).unwrap();
            assert!(s.max_abs() <= 1e-5 && s.lambda.abs() <= 1e-5, "{}", case.name);
        }
    }
}

#[test]
fn gauss_curvature_of_the_cubic() {
    // g′ = v (dx² + dv²) has K = 1/(2v³).
    let f = prep("z1^3/6", 1);
    for mode in [DerivativeMode::default(), DerivativeMode::Exact] {
        let geom = Geometry::with_mode(&f, mode);
        for (v, k) in [(1.0, 0.5), (2.0, 0.0625)] {
            let lc = levi_civita_curvature(&geom, &geom.point(&[c(0.3, v)]).unwrap()).unwrap();
            assert!((lc.gauss.unwrap() - k).abs() <= 1e-4, "{mode:?} v={v}: {:?}", lc.gauss);
            assert!((lc.scalar - 2.0 * k).abs() <= 2e-4);
        }
    }
    let q = prep("(i/2)*z1^2", 1);
    let geom = Geometry::new(&q);
    let lc = levi_civita_curvature(&geom, &geom.point(&[c(0.0, 0.0)]).unwrap()).unwrap();
    assert!(lc.scalar.abs() <= 1e-8);
}

#[test]
fn finite_difference_and_exact_modes_agree() {
    for case in &BUNDLED {
        let f = case.prepotential().unwrap();
        let fd = Geometry::new(&f);
        let exact = Geometry::with_mode(&f, DerivativeMode::Exact);
        for z in random_points(case, 10, 19) {
            let a = PointResiduals::evaluate(&fd, &fd.point(&z).unwrap()).unwrap();
            let b = PointResiduals::evaluate(&exact, &exact.point(&z).unwrap()).unwrap();
            assert!(b.conjugacy <= 1e-12 && b.curvature_nabla_j <= 1e-12 && b.shape <= 1e-12, "{}: {b:?}", case.name);
            for (x, y) in [
                (a.conjugacy, b.conjugacy),
                (a.nabla_omega, b.nabla_omega),
                (a.d_nabla_j, b.d_nabla_j),
                (a.nijenhuis, b.nijenhuis),
                (a.curvature_nabla, b.curvature_nabla),
                (a.curvature_nabla_j, b.curvature_nabla_j),
                (a.shape, b.shape),
            ] {
                assert!((x - y).abs() <= 1e-6, "{}: {x} vs {y}", case.name);
            }
            let fa = fd.frame(&fd.point(&z).unwrap()).unwrap();
            let fb = exact.frame(&exact.point(&z).unwrap()).unwrap();
            for (da, db) in fa.d_nabla_j.iter().zip(&fb.d_nabla_j) {
                for (x, y) in da.as_slice().iter().zip(db.as_slice()) {
                    assert!((x - y).abs() <= 1e-6 * (1.0 + y.abs()));
                }
            }
        }
    }
}

#[test]
fn richardson_levels_improve_residuals() {
    // Residuals with nonzero truncation error on a smooth non-polynomial prepotential.
    let f = prep("exp(z1) + (i/2)*z1^2", 1);
    let z = [c(0.4, 0.5)];
    let residuals = |levels: usize| {
        let cfg = FdConfig::new(1e-3, levels).unwrap();
        let geom = Geometry::with_mode(&f, DerivativeMode::FiniteDifference(cfg));
        PointResiduals::evaluate(&geom, &geom.point(&z).unwrap()).unwrap()
    };
    let (one, two) = (residuals(1), residuals(2));
    for (name, a, b) in [
        ("conjugacy", one.conjugacy, two.conjugacy),
        ("nabla_omega", one.nabla_omega, two.nabla_omega),
        ("nijenhuis", one.nijenhuis, two.nijenhuis),
        ("curvature_nabla", one.curvature_nabla, two.curvature_nabla),
        ("curvature_nablaJ", one.curvature_nabla_j, two.curvature_nabla_j),
        ("shape", one.shape, two.shape),
    ] {
        assert!(a > 1e-9, "{name} has no truncation error at level 1: {a}");
        assert!(b * 10.0 <= a, "{name}: {a} -> {b}");
    }
}

#[test]
fn metric_signature_doubles_that_of_b() {
    for case in &BUNDLED {
        let f = case.prepotential().unwrap();
        for z in random_points(case, 20, 23) {
            let p = SKPoint::new(&f, &z).unwrap();
            let sb = p.sig_b().unwrap();
            let sg = signature(&sksphere::SymMatrix::symmetrize(&chart_metric(&p)), 1e-12).unwrap();
            assert_eq!(sg, Signature::new(2 * sb.positive, 2 * sb.negative));
        }
    }
    let p = SKPoint::new(&prep("(-i/2)*z1^2 + z1^3/7", 1), &[c(0.1, 0.2)]).unwrap();
    assert_eq!(p.sig_b(), Some(Signature::new(0, 1)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identities_at_random_cubic_points(x in -1.0f64..1.0, v in 0.5f64..2.0) {
        let f = prep("z1^3/6", 1);
        let geom = Geometry::new(&f);
        let r = PointResiduals::evaluate(&geom, &geom.point(&[c(x, v)]).unwrap()).unwrap();
        prop_assert!(r.conjugacy <= 1e-6);
        prop_assert!(r.nabla_omega <= 1e-6 && r.d_nabla_j <= 1e-6);
        prop_assert!(r.nijenhuis <= 1e-6);
        prop_assert!(r.torsion_nabla <= 1e-5 && r.curvature_nabla <= 1e-5);
        prop_assert!(r.torsion_nabla_j <= 1e-5 && r.curvature_nabla_j <= 1e-5);
        prop_assert!(r.shape <= 1e-5 && r.shape_lambda.abs() <= 1e-5);
    }
}
