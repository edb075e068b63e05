//! The defining identities of the special Kähler structure, each evaluated
//! as a max-abs residual at a point.
//!
//! The `*_of` functions are pure in their tensor inputs so that controls can
//! feed in deliberately wrong connections or complex structures.

use crate::numerics::{invert, Mat, Tensor3};
use crate::GeometryError;

use super::connection::ConnectionKind;
use super::curvature::{curvature_residual, levi_civita, ricci, riemann, torsion_residual};
use super::frame::{chart_metric_derivatives, Geometry, LocalFrame};
use super::point::SKPoint;

/// `max |∂_b g_{cd} − Γ_left^e_{bc} g_{ed} − Γ_right^e_{bd} g_{ce}|`. Zero iff
/// `Γ_right` is the `g`-conjugate of `Γ_left`.
pub fn conjugacy_residual_of(g: &Mat, dg: &Tensor3, left: &Tensor3, right: &Tensor3) -> f64 {
    let n = g.nrows();
    let mut worst = 0.0f64;
    for b in 0..n {
        for c in 0..n {
            for d in 0..n {
                let mut v = dg.get(b, c, d);
                for e in 0..n {
                    v -= left.get(e, b, c) * g[(e, d)] + right.get(e, b, d) * g[(c, e)];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

/// `max |∂_b ω_{cd} − Γ^e_{bc} ω_{ed} − Γ^e_{bd} ω_{ce}|`, i.e. `‖∇ω‖`.
pub fn parallel_form_residual_of(omega: &Mat, domega: &Tensor3, gamma: &Tensor3) -> f64 {
    conjugacy_residual_of(omega, domega, gamma, gamma)
}

/// `max |(∇_b J)^a_c − (∇_c J)^a_b|` with
/// `(∇_b J)^a_c = ∂_b J^a_c + Γ^a_{be} J^e_c − Γ^e_{bc} J^a_e`; `dj[b][a][c] = ∂_b J^a_c`.
pub fn d_nabla_j_residual_of(j: &Mat, dj: &Tensor3, gamma: &Tensor3) -> f64 {
    let n = j.nrows();
    let cov = |b: usize, a: usize, c: usize| -> f64 {
        let mut v = dj.get(b, a, c);
        for e in 0..n {
            v += gamma.get(a, b, e) * j[(e, c)] - gamma.get(e, b, c) * j[(a, e)];
        }
        v
    };
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in b + 1..n {
                worst = worst.max((cov(b, a, c) - cov(c, a, b)).abs());
            }
        }
    }
    worst
}

/// Nijenhuis tensor on coordinate fields,
/// `N^a_{bc} = J^d_b ∂_d J^a_c − J^d_c ∂_d J^a_b − J^a_d (∂_b J^d_c − ∂_c J^d_b)`,
/// with `dj[d][a][c] = ∂_d J^a_c`. Returns the max-abs component.
pub fn nijenhuis_of(j: &Mat, dj: &Tensor3) -> f64 {
    let n = j.nrows();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in b + 1..n {
                let mut v = 0.0;
                for d in 0..n {
                    v += j[(d, b)] * dj.get(d, a, c) - j[(d, c)] * dj.get(d, a, b);
                    v -= j[(a, d)] * (dj.get(b, d, c) - dj.get(c, d, b));
                }
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

/// Shape operator `S = g⁻¹ Ric` and `λ = tr S / n`.
#[derive(Debug, Clone)]
pub struct ShapeTensor {
    pub s: Mat,
    pub lambda: f64,
}

impl ShapeTensor {
    pub fn max_abs(&self) -> f64 {
        self.s.amax()
    }
}

pub fn shape_tensor_of(g: &Mat, gamma: &Tensor3, dgamma: &[Tensor3]) -> Result<ShapeTensor, GeometryError> {
    let n = g.nrows();
    let ric = ricci(&riemann(gamma, dgamma), n);
    let s = invert(g)? * ric;
    let lambda = s.trace() / n as f64;
    Ok(ShapeTensor { s, lambda })
}

pub fn conjugacy_residual(frame: &LocalFrame) -> f64 {
    conjugacy_residual_of(&frame.metric, &frame.d_metric, &frame.nabla.gamma, &frame.nabla_j.gamma)
}

/// `(‖∇ω‖, ‖d^∇J‖)` residuals.
pub fn special_residuals(frame: &LocalFrame) -> (f64, f64) {
    (
        parallel_form_residual_of(&frame.omega, &frame.d_omega, &frame.nabla.gamma),
        d_nabla_j_residual_of(&frame.j, &frame.d_j, &frame.nabla.gamma),
    )
}

/// Nijenhuis residual of the complex structure expressed in Darboux coordinates.
pub fn nijenhuis(frame: &LocalFrame) -> f64 {
    nijenhuis_of(&frame.darboux_j, &frame.darboux_dj)
}

/// `(torsion, curvature)` residuals of the given connection.
pub fn curvature_torsion(frame: &LocalFrame, kind: ConnectionKind) -> (f64, f64) {
    let (field, d) = frame.connection(kind);
    (torsion_residual(&field.gamma), curvature_residual(&field.gamma, d))
}

/// Shape tensor from the Ricci curvature of the conjugate connection `∇^J`.
pub fn shape_tensor(frame: &LocalFrame) -> Result<ShapeTensor, GeometryError> {
    shape_tensor_of(&frame.metric, &frame.nabla_j.gamma, &frame.d_nabla_j)
}

/// Levi-Civita symbols of `g′` at `p`; used only by controls.
pub fn levi_civita_at(p: &SKPoint) -> Result<Tensor3, GeometryError> {
    levi_civita(&super::frame::chart_metric(p), &chart_metric_derivatives(p))
}

/// All pointwise residuals of the special Kähler structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResiduals {
    pub lagrangian: f64,
    pub conjugacy: f64,
    pub nabla_omega: f64,
    pub d_nabla_j: f64,
    pub nijenhuis: f64,
    pub torsion_nabla: f64,
    pub curvature_nabla: f64,
    pub torsion_nabla_j: f64,
    pub curvature_nabla_j: f64,
    pub shape: f64,
    pub shape_lambda: f64,
}

impl PointResiduals {
    pub fn from_frame(frame: &LocalFrame) -> Result<Self, GeometryError> {
        let (nabla_omega, d_nabla_j) = special_residuals(frame);
        let (torsion_nabla, curvature_nabla) = curvature_torsion(frame, ConnectionKind::Nabla);
        let (torsion_nabla_j, curvature_nabla_j) = curvature_torsion(frame, ConnectionKind::NablaJ);
        let shape = shape_tensor(frame)?;
        Ok(PointResiduals {
            lagrangian: frame.point.lagrangian_residual(),
            conjugacy: conjugacy_residual(frame),
            nabla_omega,
            d_nabla_j,
            nijenhuis: nijenhuis(frame),
            torsion_nabla,
            curvature_nabla,
            torsion_nabla_j,
            curvature_nabla_j,
            shape: shape.max_abs(),
            shape_lambda: shape.lambda.abs(),
        })
    }

    pub fn evaluate(geom: &Geometry<'_>, p: &SKPoint) -> Result<Self, GeometryError> {
        Self::from_frame(&geom.frame(p)?)
    }
}
