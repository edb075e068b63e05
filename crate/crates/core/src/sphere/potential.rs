//! The graph potential `u` with `Hess_{(x,y)} u = G`, obtained by integrating
//! the closed one-form `β = Σ_i Im F_i d(Re z^i) − Im z^i d(Re F_i)`.
//!
//! In the working chart `β = Σ_j (s_j − Σ_i v_i A_ij) dx_j + (Σ_i v_i B_ij) dv_j`,
//! and `du = s dx − v dy` in Darboux coordinates.

use num_complex::Complex64;

use crate::dsl::Prepotential;
use crate::numerics::{complex_inf_norm, fd_hessian, invert, line_integral, FdConfig, Mat, PathSpec, SymMatrix};
use crate::kahler::DEGENERACY_SCALE;
use crate::GeometryError;

/// Coefficients `(β_x, β_v)` of the potential one-form at `z`. Fails on the
/// degenerate locus so that paths crossing it are rejected.
pub fn potential_form(prep: &Prepotential, z: &[Complex64]) -> Result<Vec<f64>, GeometryError> {
    let m = prep.arity();
    let (grad, hess) = prep.gradient_hessian(z)?;
    let b = Mat::from_fn(m, m, |i, j| hess[i * m + j].im);
    let tol = DEGENERACY_SCALE * (1.0 + complex_inf_norm(&hess, m));
    let det = b.determinant();
    if det.abs() <= tol {
        return Err(GeometryError::Degenerate { det, tol });
    }
    let mut out = vec![0.0; 2 * m];
    for j in 0..m {
        let mut bx = grad[j].im;
        let mut bv = 0.0;
        for i in 0..m {
            let h = hess[i * m + j];
            bx -= z[i].im * h.re;
            bv += z[i].im * h.im;
        }
        out[j] = bx;
        out[m + j] = bv;
    }
    Ok(out)
}

/// `u(end) − u(start)` along `path`; with `u(base) = 0` this is `u` at the end point.
pub fn potential_u(prep: &Prepotential, path: &PathSpec) -> Result<f64, GeometryError> {
    line_integral(|z| potential_form(prep, z), path)
}

/// `u(z)` relative to `u(from) = 0` along the straight segment.
pub fn potential_on_segment(prep: &Prepotential, from: &[Complex64], to: &[Complex64]) -> Result<f64, GeometryError> {
    if from == to {
        return Ok(0.0);
    }
    potential_u(prep, &PathSpec::segment(from.to_vec(), to.to_vec())?)
}

/// Solves `Re ∂F/∂z(x + i v) = y` for `v` by Newton's method started at `v_guess`.
pub fn invert_darboux(
    prep: &Prepotential,
    x: &[f64],
    y: &[f64],
    v_guess: &[f64],
) -> Result<Vec<Complex64>, GeometryError> {
    let m = prep.arity();
    let mut v = v_guess.to_vec();
    let scale = 1.0 + y.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for _ in 0..50 {
        let z: Vec<Complex64> = (0..m).map(|k| Complex64::new(x[k], v[k])).collect();
        let (grad, hess) = prep.gradient_hessian(&z)?;
        let r = nalgebra::DVector::from_fn(m, |i, _| grad[i].re - y[i]);
        if r.amax() <= 4.0 * f64::EPSILON * scale {
            return Ok(z);
        }
        let b = Mat::from_fn(m, m, |i, j| hess[i * m + j].im);
        let step = invert(&b).map_err(|_| GeometryError::SingularChart("nabla"))? * r;
        for k in 0..m {
            v[k] += step[k];
        }
        if step.amax() <= 4.0 * f64::EPSILON * (1.0 + v.iter().fold(0.0f64, |a, b| a.max(b.abs()))) {
            let z = (0..m).map(|k| Complex64::new(x[k], v[k])).collect();
            return Ok(z);
        }
    }
    Err(GeometryError::NoConvergence("inverse Darboux map"))
}

/// Default stencil for the finite-difference Hessian of `u`. Second
/// differences divide by `h²`, so the step is coarser than the first-order default.
pub fn potential_fd_config() -> FdConfig {
    FdConfig::new(1e-3, 2).expect("valid constant config")
}

/// Finite-difference Hessian of `u` in Darboux coordinates at `z0`,
/// evaluating `u` by line integrals from `z0` and the inverse Darboux map.
/// Independent of the closed-form metric.
pub fn fd_potential_hessian(prep: &Prepotential, z0: &[Complex64], cfg: &FdConfig) -> Result<SymMatrix, GeometryError> {
    let m = prep.arity();
    let (grad, _) = prep.gradient_hessian(z0)?;
    let q0: Vec<f64> = z0.iter().map(|c| c.re).chain(grad.iter().map(|c| c.re)).collect();
    let v0: Vec<f64> = z0.iter().map(|c| c.im).collect();
    let field = |q: &[f64]| -> Result<f64, GeometryError> {
        let z = invert_darboux(prep, &q[..m], &q[m..], &v0)?;
        potential_on_segment(prep, z0, &z)
    };
    let h = fd_hessian(field, &q0, cfg)?;
    Ok(SymMatrix::from_upper(Mat::from_row_slice(2 * m, 2 * m, &h)))
}
