//! Flat Darboux coordinates and the closed-form Blaschke metric.

use crate::kahler::{AffineChart, ConnectionKind, SKPoint};
use crate::numerics::{Mat, SymMatrix};
use crate::GeometryError;

/// `(x, y) = (Re z, Re ∂F/∂z)`.
pub fn darboux(p: &SKPoint) -> (Vec<f64>, Vec<f64>) {
    let x = p.z().iter().map(|c| c.re).collect();
    let y = p.jet().grad.iter().map(|c| c.re).collect();
    (x, y)
}

/// The standard complex structure in the working chart `(x, v)`:
/// `J ∂x_k = ∂v_k`, `J ∂v_k = −∂x_k`.
pub fn standard_complex_structure(m: usize) -> Mat {
    let mut j = Mat::zeros(2 * m, 2 * m);
    for k in 0..m {
        j[(m + k, k)] = 1.0;
        j[(k, m + k)] = -1.0;
    }
    j
}

/// Blaschke metric `G = Hess u` in `(x, y)` coordinates:
/// `[[B + A B⁻¹ A, −A B⁻¹], [−B⁻¹ A, B⁻¹]]`.
pub fn metric_g(p: &SKPoint) -> Result<SymMatrix, GeometryError> {
    p.require_nondegenerate()?;
    let m = p.arity();
    let a = p.re_hess().as_matrix();
    let b = p.im_hess().as_matrix();
    let binv = p.im_hess().inverse()?.into_matrix();
    let a_binv = a * &binv;
    let mut g = Mat::zeros(2 * m, 2 * m);
    g.view_mut((0, 0), (m, m)).copy_from(&(b + &a_binv * a));
    g.view_mut((0, m), (m, m)).copy_from(&(-&a_binv));
    g.view_mut((m, m), (m, m)).copy_from(&binv);
    Ok(SymMatrix::from_upper(g))
}

/// `|det G − 1|`, the Monge–Ampère certificate `det Hess u = 1`.
pub fn ma_residual(p: &SKPoint) -> Result<f64, GeometryError> {
    Ok((metric_g(p)?.determinant() - 1.0).abs())
}

/// Flat-coordinate data at one point.
#[derive(Debug, Clone)]
pub struct DarbouxFrame {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `∂(x, y)/∂(x, v) = [[I, 0], [A, −B]]`.
    pub jacobian: Mat,
    pub g: SymMatrix,
    /// Complex structure in `(x, y)`: `T J₀ T⁻¹`.
    pub j: Mat,
    /// `ω = G(J·, ·)`, i.e. `ω_ab = (Jᵀ G)_ab`.
    pub omega: Mat,
}

impl DarbouxFrame {
    pub fn new(p: &SKPoint) -> Result<Self, GeometryError> {
        let g = metric_g(p)?;
        let (x, y) = darboux(p);
        let chart = AffineChart::new(ConnectionKind::Nabla, p.jet());
        let tinv = chart.inverse_jacobian()?;
        let j = &chart.jacobian * standard_complex_structure(p.arity()) * &tinv;
        let omega = j.transpose() * g.as_matrix();
        Ok(DarbouxFrame {
            x,
            y,
            jacobian: chart.jacobian,
            g,
            j,
            omega,
        })
    }

    pub fn det_g(&self) -> f64 {
        self.g.determinant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::Prepotential;
    use num_complex::Complex64;

    fn point(f: &str, m: usize, z: &[Complex64]) -> SKPoint {
        SKPoint::new(&Prepotential::parse(f, m).unwrap(), z).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn darboux_values() {
        assert_eq!(darboux(&point("(i/2)*z1^2", 1, &[c(1.0, 2.0)])), (vec![1.0], vec![-2.0]));
        let (x, y) = darboux(&point("z1^3/6", 1, &[c(1.0, 1.0)]));
        assert_eq!(x, vec![1.0]);
        assert!(y[0].abs() < 1e-15);
        let (x, y) = darboux(&point("z1*z2 + (i/2)*(z1^2+z2^2)", 2, &[c(1.0, 0.0), c(0.0, 1.0)]));
        assert_eq!(x, vec![1.0, 0.0]);
        assert!(y.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn metric_fixtures() {
        let g = metric_g(&point("(i/2)*z1^2", 1, &[c(0.2, 0.3)])).unwrap();
        assert_eq!(g, SymMatrix::identity(2));
        let want = [2.0, -1.0, -1.0, 1.0];
        for (f, z) in [("((1+i)/2)*z1^2", c(-0.5, 0.5)), ("z1^3/6", c(1.0, 1.0))] {
            let g = metric_g(&point(f, 1, &[z])).unwrap();
            for (k, w) in want.iter().enumerate() {
                assert!((g.get(k / 2, k % 2) - w).abs() < 1e-12);
            }
            assert!(ma_residual(&point(f, 1, &[z])).unwrap() < 1e-12);
        }
    }

    #[test]
    fn omega_for_quarter_turn_quadratic() {
        let frame = DarbouxFrame::new(&point("(i/2)*z1^2", 1, &[c(0.7, -0.1)])).unwrap();
        assert_eq!(frame.omega, Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        assert_eq!(frame.j, Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
    }

    #[test]
    fn degenerate_point_has_no_metric() {
        assert!(metric_g(&point("z1^3/6", 1, &[c(1.0, 0.0)])).is_err());
    }
}
