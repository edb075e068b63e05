use num_complex::Complex64;

use crate::dsl::{HoloJet, Prepotential};
use crate::numerics::{complex_inf_norm, signature, Mat, Signature, SymMatrix};
use crate::GeometryError;

/// Relative threshold for `|det Im Hess F|`; the absolute one is
/// `DEGENERACY_SCALE * (1 + ‖Hess F‖∞)`.
pub const DEGENERACY_SCALE: f64 = 1e-8;

/// Splits a working-chart point `ξ = (x, v)` into complex coordinates `z = x + i v`.
pub fn chart_to_z(xi: &[f64]) -> Vec<Complex64> {
    let m = xi.len() / 2;
    (0..m).map(|k| Complex64::new(xi[k], xi[m + k])).collect()
}

pub fn z_to_chart(z: &[Complex64]) -> Vec<f64> {
    z.iter().map(|c| c.re).chain(z.iter().map(|c| c.im)).collect()
}

/// The special Kähler structure induced by `F` at one point.
#[derive(Debug, Clone)]
pub struct SKPoint {
    z: Vec<Complex64>,
    jet: HoloJet,
    re_hess: SymMatrix,
    im_hess: SymMatrix,
    tol_deg: f64,
    nondegenerate: bool,
    sig_b: Option<Signature>,
}

impl SKPoint {
    pub fn new(prep: &Prepotential, z: &[Complex64]) -> Result<Self, GeometryError> {
        Ok(Self::from_jet(z.to_vec(), prep.jet(z)?))
    }

    /// Like [`SKPoint::new`] but also evaluates fourth derivatives.
    pub fn with_fourth(prep: &Prepotential, z: &[Complex64]) -> Result<Self, GeometryError> {
        Ok(Self::from_jet(z.to_vec(), prep.jet_with_fourth(z)?))
    }

    pub fn at_chart(prep: &Prepotential, xi: &[f64]) -> Result<Self, GeometryError> {
        Self::new(prep, &chart_to_z(xi))
    }

    pub fn from_jet(z: Vec<Complex64>, jet: HoloJet) -> Self {
        let m = jet.arity();
        let re = Mat::from_fn(m, m, |i, j| jet.d2(i, j).re);
        let im = Mat::from_fn(m, m, |i, j| jet.d2(i, j).im);
        let re_hess = SymMatrix::from_upper(re);
        let im_hess = SymMatrix::from_upper(im);
        let tol_deg = DEGENERACY_SCALE * (1.0 + complex_inf_norm(&jet.hess, m));
        let nondegenerate = im_hess.determinant().abs() > tol_deg;
        let sig_b = if nondegenerate {
            signature(&im_hess, 0.0).ok().filter(|s| s.positive + s.negative == m)
        } else {
            None
        };
        SKPoint {
            z,
            jet,
            re_hess,
            im_hess,
            tol_deg,
            nondegenerate,
            sig_b,
        }
    }

    pub fn arity(&self) -> usize {
        self.jet.arity()
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    /// `ξ = (Re z, Im z)`.
    pub fn chart(&self) -> Vec<f64> {
        z_to_chart(&self.z)
    }

    pub fn jet(&self) -> &HoloJet {
        &self.jet
    }

    /// `A = Re Hess F`.
    pub fn re_hess(&self) -> &SymMatrix {
        &self.re_hess
    }

    /// `B = Im Hess F`.
    pub fn im_hess(&self) -> &SymMatrix {
        &self.im_hess
    }

    pub fn degeneracy_tolerance(&self) -> f64 {
        self.tol_deg
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    /// Nondegeneracy flag plus the signature of `B` when defined.
    pub fn nondegenerate(&self) -> (bool, Option<Signature>) {
        (self.nondegenerate, self.sig_b)
    }

    pub fn sig_b(&self) -> Option<Signature> {
        self.sig_b
    }

    /// Smallest `|eigenvalue|` of `B` relative to `1 + ‖Hess F‖∞`.
    pub fn relative_margin(&self) -> f64 {
        let m = self.arity();
        let scale = 1.0 + complex_inf_norm(&self.jet.hess, m);
        let min = self
            .im_hess
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, |acc, e| acc.min(e.abs()));
        min / scale
    }

    pub fn require_nondegenerate(&self) -> Result<(), GeometryError> {
        if self.nondegenerate {
            Ok(())
        } else {
            Err(GeometryError::Degenerate {
                det: self.im_hess.determinant(),
                tol: self.tol_deg,
            })
        }
    }

    /// The Hermitian form `φ*γ` on coordinate vectors: `h_ij = 2 Im F_ij`.
    pub fn hermitian_form(&self) -> Vec<Complex64> {
        let m = self.arity();
        let mut h = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                h[i * m + j] = Complex64::new(2.0 * self.im_hess.get(i, j), 0.0);
            }
        }
        h
    }

    /// `max_{i<j} |F_ij − F_ji|`, the Lagrangian certificate `Ω(φ_*e_i, φ_*e_j)`.
    pub fn lagrangian_residual(&self) -> f64 {
        lagrangian_residual_of(&self.jet.hess, self.arity())
    }
}

/// Matrix of the ambient form `γ = i Ω(·, τ·)` on `T*C^m = C^{2m}` in the basis
/// `(e_1..e_m, f_1..f_m)` with `Ω(e_k, f_k) = 1`; row-major, order `2m`.
pub fn ambient_hermitian_form(m: usize) -> Vec<Complex64> {
    let n = 2 * m;
    let mut h = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..m {
        h[k * n + m + k] = Complex64::new(0.0, 1.0);
        h[(m + k) * n + k] = Complex64::new(0.0, -1.0);
    }
    h
}

/// Lagrangian residual of an arbitrary (possibly independently computed) Hessian.
pub fn lagrangian_residual_of(hess: &[Complex64], m: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in i + 1..m {
            worst = worst.max((hess[i * m + j] - hess[j * m + i]).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cubic_on_real_axis_is_degenerate() {
        let f = Prepotential::parse("z1^3/6", 1).unwrap();
        let p = SKPoint::new(&f, &[c(0.7, 0.0)]).unwrap();
        assert!(!p.is_nondegenerate());
        assert_eq!(p.sig_b(), None);
        assert!(p.require_nondegenerate().is_err());
    }

    #[test]
    fn quadratic_signatures() {
        let pos = Prepotential::parse("(i/2)*z1^2", 1).unwrap();
        let neg = Prepotential::parse("(-i/2)*z1^2", 1).unwrap();
        for z in [c(0.0, 0.0), c(3.0, -2.0)] {
            let p = SKPoint::new(&pos, &[z]).unwrap();
            assert_eq!(p.nondegenerate(), (true, Some(Signature::new(1, 0))));
            let q = SKPoint::new(&neg, &[z]).unwrap();
            assert_eq!(q.nondegenerate(), (true, Some(Signature::new(0, 1))));
        }
    }

    #[test]
    fn hermitian_form_values() {
        let f = Prepotential::parse("z1^3/6", 1).unwrap();
        let p = SKPoint::new(&f, &[c(1.0, 2.0)]).unwrap();
        assert_eq!(p.hermitian_form(), vec![c(4.0, 0.0)]);
        let g = Prepotential::parse("z1*z2 + (i/2)*(z1^2+z2^2)", 2).unwrap();
        let p = SKPoint::new(&g, &[c(0.3, 0.1), c(-1.0, 2.0)]).unwrap();
        assert_eq!(p.hermitian_form(), vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn jet_hessian_is_lagrangian() {
        let f = Prepotential::parse("z1*z2^3", 2).unwrap();
        let p = SKPoint::new(&f, &[c(1.0, 1.0), c(2.0, -1.0)]).unwrap();
        assert_eq!(p.lagrangian_residual(), 0.0);
    }

    #[test]
    fn chart_round_trip() {
        let z = vec![c(1.0, -2.0), c(0.5, 3.0)];
        assert_eq!(z_to_chart(&z), vec![1.0, 0.5, -2.0, 3.0]);
        assert_eq!(chart_to_z(&z_to_chart(&z)), z);
    }
}
