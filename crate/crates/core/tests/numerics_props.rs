use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use sksphere::numerics::{line_integral, signature, Mat, NumericsError, PathSpec, SymMatrix};

fn sym_matrix(max_n: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-2.0f64..2.0, n * n)
            .prop_map(move |v| SymMatrix::symmetrize(&DMatrix::from_vec(n, n, v)))
    })
}

fn sym_with_factors(max_n: usize, count: usize) -> impl Strategy<Value = (SymMatrix, Vec<Mat>)> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| SymMatrix::symmetrize(&DMatrix::from_vec(n, n, v))),
            prop::collection::vec(square(n), count),
        )
    })
}

fn square(n: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| DMatrix::from_vec(n, n, v))
}

proptest! {
    #[test]
    fn inverse_and_determinant(m in sym_matrix(6)) {
        let det = m.determinant();
        prop_assume!(det.abs() > 1e-6);
        let inv = m.inverse().unwrap();
        let n = m.order();
        // Conditioning enters the roundoff; scale by ‖M‖·‖M⁻¹‖.
        let cond = m.max_abs() * inv.max_abs() * n as f64;
        prop_assume!(cond < 1e4);
        let prod = inv.as_matrix() * m.as_matrix();
        prop_assert!((prod - DMatrix::identity(n, n)).amax() <= 1e-10 * cond.max(1.0));
        prop_assert!((inv.determinant() * det - 1.0).abs() <= 1e-10 * cond.max(1.0));
    }

    #[test]
    fn signature_is_congruence_invariant((m, cs) in sym_with_factors(6, 20)) {
        let evs = m.eigenvalues();
        prop_assume!(evs.iter().all(|e| e.abs() > 1e-3));
        let sig = signature(&m, 1e-9).unwrap();
        for c in cs.iter().filter(|c| c.determinant().abs() > 1e-2) {
            // A badly conditioned C can push an eigenvalue under the threshold.
            if let Ok(s) = signature(&m.congruence(c), 1e-12) {
                prop_assert_eq!(s, sig);
            }
        }
    }

    #[test]
    fn line_integrals_are_additive(
        a in (-1.0f64..1.0, 0.5f64..2.0),
        b in (-1.0f64..1.0, 0.5f64..2.0),
        c in (-1.0f64..1.0, 0.5f64..2.0),
    ) {
        let p = |(x, v): (f64, f64)| vec![Complex64::new(x, v)];
        prop_assume!(a != b && b != c);
        // Not closed, so the value depends on the path and additivity is nontrivial.
        let form = |z: &[Complex64]| -> Result<Vec<f64>, NumericsError> {
            let (x, v) = (z[0].re, z[0].im);
            Ok(vec![x * v * v + (3.0 * v).sin(), x.exp() / v])
        };
        let ab = PathSpec::segment(p(a), p(b)).unwrap();
        let bc = PathSpec::segment(p(b), p(c)).unwrap();
        let whole = ab.concat(&bc).unwrap();
        let sum = line_integral(form, &ab).unwrap() + line_integral(form, &bc).unwrap();
        let total = line_integral(form, &whole).unwrap();
        prop_assert!((sum - total).abs() <= 1e-12 * 1.0f64.max(total.abs()));
    }
}

#[test]
fn known_signatures() {
    let m = SymMatrix::from_upper(DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 1.0]));
    let evs = m.eigenvalues();
    let s5 = 5f64.sqrt();
    assert!((evs[0] - (3.0 - s5) / 2.0).abs() < 1e-14);
    assert!((evs[1] - (3.0 + s5) / 2.0).abs() < 1e-14);
    assert_eq!(signature(&m, 1e-12).unwrap().to_string(), "(2,0)");
    assert_eq!(signature(&SymMatrix::from_diagonal(&[1.0, -1.0]), 1e-12).unwrap().to_string(), "(1,1)");
}
