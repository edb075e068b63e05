//! Pointwise tensor data in the working chart, with first derivatives taken
//! either by finite differences or exactly from fourth derivatives of `F`.

use crate::dsl::Prepotential;
use crate::numerics::{fd_jacobian, FdConfig, Mat, Tensor3};
use crate::sphere::{standard_complex_structure, DarbouxFrame};
use crate::GeometryError;

use super::connection::{christoffel_derivatives, cidx, mu, AffineChart, ConnectionField, ConnectionKind};
use super::point::SKPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    FiniteDifference(FdConfig),
    Exact,
}

impl Default for DerivativeMode {
    fn default() -> Self {
        DerivativeMode::FiniteDifference(FdConfig::default())
    }
}

/// A prepotential plus the derivative strategy used for residuals.
#[derive(Debug, Clone, Copy)]
pub struct Geometry<'a> {
    pub prep: &'a Prepotential,
    pub mode: DerivativeMode,
}

impl<'a> Geometry<'a> {
    pub fn new(prep: &'a Prepotential) -> Self {
        Geometry {
            prep,
            mode: DerivativeMode::default(),
        }
    }

    pub fn with_mode(prep: &'a Prepotential, mode: DerivativeMode) -> Self {
        Geometry { prep, mode }
    }

    pub fn arity(&self) -> usize {
        self.prep.arity()
    }

    pub fn point_at_chart(&self, xi: &[f64]) -> Result<SKPoint, GeometryError> {
        let z = super::point::chart_to_z(xi);
        match self.mode {
            DerivativeMode::Exact => SKPoint::with_fourth(self.prep, &z),
            DerivativeMode::FiniteDifference(_) => SKPoint::new(self.prep, &z),
        }
    }

    pub fn point(&self, z: &[num_complex::Complex64]) -> Result<SKPoint, GeometryError> {
        self.point_at_chart(&super::point::z_to_chart(z))
    }

    pub fn frame(&self, p: &SKPoint) -> Result<LocalFrame, GeometryError> {
        LocalFrame::new(self, p)
    }
}

/// Metric `g′ = diag(B, B)` in the working chart.
pub fn chart_metric(p: &SKPoint) -> Mat {
    let m = p.arity();
    let b = p.im_hess().as_matrix();
    let mut g = Mat::zeros(2 * m, 2 * m);
    g.view_mut((0, 0), (m, m)).copy_from(b);
    g.view_mut((m, m), (m, m)).copy_from(b);
    g
}

/// Kähler form `ω′ = J₀ᵀ g′ = [[0, B], [−B, 0]]` in the working chart.
pub fn chart_kahler_form(p: &SKPoint) -> Mat {
    let m = p.arity();
    let b = p.im_hess().as_matrix();
    let mut w = Mat::zeros(2 * m, 2 * m);
    w.view_mut((0, m), (m, m)).copy_from(b);
    w.view_mut((m, 0), (m, m)).copy_from(&(-b));
    w
}

/// `∂_f B_{ij} = Im(μ_f F_{ij k(f)})`, as `[f][i][j]` over `f < 2m`, `i, j < m`.
fn im_hess_derivatives(p: &SKPoint) -> Vec<Mat> {
    let m = p.arity();
    let jet = p.jet();
    (0..2 * m)
        .map(|f| Mat::from_fn(m, m, |i, j| (mu(f, m) * jet.d3(i, j, cidx(f, m))).im))
        .collect()
}

/// Exact `∂_b g′_{cd}` stored `[b][c][d]`.
pub fn chart_metric_derivatives(p: &SKPoint) -> Tensor3 {
    let m = p.arity();
    let n = 2 * m;
    let db = im_hess_derivatives(p);
    let mut out = Tensor3::zeros(n);
    for (b, d_b) in db.iter().enumerate() {
        for i in 0..m {
            for j in 0..m {
                out.set(b, i, j, d_b[(i, j)]);
                out.set(b, m + i, m + j, d_b[(i, j)]);
            }
        }
    }
    out
}

fn chart_kahler_form_derivatives(p: &SKPoint) -> Tensor3 {
    let m = p.arity();
    let n = 2 * m;
    let db = im_hess_derivatives(p);
    let mut out = Tensor3::zeros(n);
    for (b, d_b) in db.iter().enumerate() {
        for i in 0..m {
            for j in 0..m {
                out.set(b, i, m + j, d_b[(i, j)]);
                out.set(b, m + i, j, -d_b[(i, j)]);
            }
        }
    }
    out
}

/// Everything the residual identities need at one point.
#[derive(Debug, Clone)]
pub struct LocalFrame {
    pub point: SKPoint,
    pub nabla: ConnectionField,
    /// `d_nabla[f]` is `∂_f Γ(∇)`.
    pub d_nabla: Vec<Tensor3>,
    pub nabla_j: ConnectionField,
    pub d_nabla_j: Vec<Tensor3>,
    /// `g′` in the working chart.
    pub metric: Mat,
    /// `∂_b g′_{cd}` stored `[b][c][d]`.
    pub d_metric: Tensor3,
    pub omega: Mat,
    pub d_omega: Tensor3,
    /// Complex structure in the working chart (constant `J₀`).
    pub j: Mat,
    /// `∂_b J^a_c` stored `[b][a][c]`.
    pub d_j: Tensor3,
    /// Complex structure in Darboux coordinates.
    pub darboux_j: Mat,
    /// `∂J/∂q^d` in Darboux coordinates, stored `[d][a][c]`.
    pub darboux_dj: Tensor3,
}

struct Bundle {
    nabla: Tensor3,
    nabla_j: Tensor3,
    metric: Mat,
    omega: Mat,
    darboux_j: Mat,
}

fn bundle(p: &SKPoint) -> Result<Bundle, GeometryError> {
    let frame = DarbouxFrame::new(p)?;
    Ok(Bundle {
        nabla: AffineChart::new(ConnectionKind::Nabla, p.jet()).christoffels()?.gamma,
        nabla_j: AffineChart::new(ConnectionKind::NablaJ, p.jet()).christoffels()?.gamma,
        metric: chart_metric(p),
        omega: chart_kahler_form(p),
        darboux_j: frame.j,
    })
}

fn flatten(b: &Bundle) -> Vec<f64> {
    let mut v = Vec::new();
    v.extend_from_slice(b.nabla.as_slice());
    v.extend_from_slice(b.nabla_j.as_slice());
    v.extend(b.metric.transpose().iter());
    v.extend(b.omega.transpose().iter());
    v.extend(b.darboux_j.transpose().iter());
    v
}

/// Converts `∂J/∂ξ^e` (stored `[e][a][c]`) into `∂J/∂q^d` via `∂ξ^e/∂q^d`.
fn to_darboux_derivatives(dj_chart: &Tensor3, tinv: &Mat) -> Tensor3 {
    let n = dj_chart.dim();
    let mut out = Tensor3::zeros(n);
    for d in 0..n {
        for e in 0..n {
            let w = tinv[(e, d)];
            if w == 0.0 {
                continue;
            }
            for a in 0..n {
                for c in 0..n {
                    out.add(d, a, c, w * dj_chart.get(e, a, c));
                }
            }
        }
    }
    out
}

impl LocalFrame {
    pub fn new(geom: &Geometry<'_>, p: &SKPoint) -> Result<Self, GeometryError> {
        p.require_nondegenerate()?;
        let m = p.arity();
        let n = 2 * m;
        let here = bundle(p)?;
        let nabla_chart = AffineChart::new(ConnectionKind::Nabla, p.jet());
        let tinv = nabla_chart.inverse_jacobian()?;
        let j0 = standard_complex_structure(m);

        let (d_nabla, d_nabla_j, d_metric, d_omega, dj_chart) = match geom.mode {
            DerivativeMode::Exact => {
                let exact = if p.jet().fourth.is_some() {
                    p.clone()
                } else {
                    SKPoint::with_fourth(geom.prep, p.z())?
                };
                let d_nabla = christoffel_derivatives(ConnectionKind::Nabla, &exact)?;
                let d_nabla_j = christoffel_derivatives(ConnectionKind::NablaJ, &exact)?;
                // ∂_e J_q = (∂_e T) J₀ T⁻¹ − J_q (∂_e T) T⁻¹, (∂_e T)^d_f = H^d_{fe}
                let mut dj = Tensor3::zeros(n);
                for e in 0..n {
                    let dt = Mat::from_fn(n, n, |d, f| nabla_chart.hessians.get(d, f, e));
                    let v = &dt * &j0 * &tinv - &here.darboux_j * &dt * &tinv;
                    for a in 0..n {
                        for c in 0..n {
                            dj.set(e, a, c, v[(a, c)]);
                        }
                    }
                }
                (
                    d_nabla,
                    d_nabla_j,
                    chart_metric_derivatives(p),
                    chart_kahler_form_derivatives(p),
                    dj,
                )
            }
            DerivativeMode::FiniteDifference(cfg) => {
                let xi = p.chart();
                let field = |q: &[f64]| -> Result<Vec<f64>, GeometryError> {
                    let sp = SKPoint::at_chart(geom.prep, q)?;
                    sp.require_nondegenerate()?;
                    Ok(flatten(&bundle(&sp)?))
                };
                let partials = fd_jacobian(field, &xi, &cfg)?;
                let n3 = n * n * n;
                let n2 = n * n;
                let mut d_nabla = Vec::with_capacity(n);
                let mut d_nabla_j = Vec::with_capacity(n);
                let mut d_metric = Tensor3::zeros(n);
                let mut d_omega = Tensor3::zeros(n);
                let mut dj = Tensor3::zeros(n);
                for (b, col) in partials.iter().enumerate() {
                    d_nabla.push(Tensor3::from_vec(n, col[..n3].to_vec()));
                    d_nabla_j.push(Tensor3::from_vec(n, col[n3..2 * n3].to_vec()));
                    let base = 2 * n3;
                    for r in 0..n {
                        for c in 0..n {
                            d_metric.set(b, r, c, col[base + r * n + c]);
                            d_omega.set(b, r, c, col[base + n2 + r * n + c]);
                            dj.set(b, r, c, col[base + 2 * n2 + r * n + c]);
                        }
                    }
                }
                (d_nabla, d_nabla_j, d_metric, d_omega, dj)
            }
        };

        Ok(LocalFrame {
            point: p.clone(),
            nabla: ConnectionField {
                kind: ConnectionKind::Nabla,
                gamma: here.nabla,
            },
            d_nabla,
            nabla_j: ConnectionField {
                kind: ConnectionKind::NablaJ,
                gamma: here.nabla_j,
            },
            d_nabla_j,
            metric: here.metric,
            d_metric,
            omega: here.omega,
            d_omega,
            j: j0,
            // J₀ has constant components in the working chart.
            d_j: Tensor3::zeros(n),
            darboux_j: here.darboux_j,
            darboux_dj: to_darboux_derivatives(&dj_chart, &tinv),
        })
    }

    pub fn connection(&self, kind: ConnectionKind) -> (&ConnectionField, &[Tensor3]) {
        match kind {
            ConnectionKind::Nabla => (&self.nabla, &self.d_nabla),
            ConnectionKind::NablaJ => (&self.nabla_j, &self.d_nabla_j),
        }
    }
}
