//! Torsion, Riemann and Ricci tensors from Christoffel symbols and their
//! first derivatives, plus the Levi-Civita connection of the chart metric.

use crate::numerics::{fd_jacobian, invert, Mat, Tensor3};
use crate::GeometryError;

use super::frame::{chart_metric, chart_metric_derivatives, DerivativeMode, Geometry};
use super::point::SKPoint;

/// `max |Γ^a_{bc} − Γ^a_{cb}|`.
pub fn torsion_residual(gamma: &Tensor3) -> f64 {
    let n = gamma.dim();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            for c in b + 1..n {
                worst = worst.max((gamma.get(a, b, c) - gamma.get(a, c, b)).abs());
            }
        }
    }
    worst
}

/// Riemann tensor `R^a_{bcd} = ∂_b Γ^a_{cd} − ∂_c Γ^a_{bd} + Γ^a_{be}Γ^e_{cd} − Γ^a_{ce}Γ^e_{bd}`,
/// flat `[a][b][c][d]`. `dgamma[f]` holds `∂_f Γ`.
pub fn riemann(gamma: &Tensor3, dgamma: &[Tensor3]) -> Vec<f64> {
    let n = gamma.dim();
    let mut r = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = dgamma[b].get(a, c, d) - dgamma[c].get(a, b, d);
                    for e in 0..n {
                        v += gamma.get(a, b, e) * gamma.get(e, c, d) - gamma.get(a, c, e) * gamma.get(e, b, d);
                    }
                    r[((a * n + b) * n + c) * n + d] = v;
                }
            }
        }
    }
    r
}

pub fn curvature_residual(gamma: &Tensor3, dgamma: &[Tensor3]) -> f64 {
    riemann(gamma, dgamma).iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `Ric_{cd} = R^a_{acd}`.
pub fn ricci(riem: &[f64], n: usize) -> Mat {
    Mat::from_fn(n, n, |c, d| (0..n).map(|a| riem[((a * n + a) * n + c) * n + d]).sum())
}

/// `Γ^a_{bc} = ½ g^{ad} (∂_b g_{dc} + ∂_c g_{db} − ∂_d g_{bc})`, with `dg[b][c][d] = ∂_b g_{cd}`.
pub fn levi_civita(g: &Mat, dg: &Tensor3) -> Result<Tensor3, GeometryError> {
    let n = g.nrows();
    let ginv = invert(g)?;
    let mut gamma = Tensor3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v: f64 = (0..n)
                    .map(|d| ginv[(a, d)] * (dg.get(b, d, c) + dg.get(c, d, b) - dg.get(d, b, c)))
                    .sum();
                gamma.set(a, b, c, 0.5 * v);
            }
        }
    }
    Ok(gamma)
}

/// Levi-Civita Christoffel symbols of the chart metric `g′` at `p`.
pub fn levi_civita_field(p: &SKPoint) -> Result<Tensor3, GeometryError> {
    p.require_nondegenerate()?;
    levi_civita(&chart_metric(p), &chart_metric_derivatives(p))
}

/// Exact `∂_f Γ_LC` using second derivatives of `g′` from fourth derivatives of `F`.
fn levi_civita_derivatives_exact(p: &SKPoint) -> Result<Vec<Tensor3>, GeometryError> {
    use super::connection::{cidx, mu};
    let jet = p.jet();
    if jet.fourth.is_none() {
        return Err(GeometryError::MissingFourthDerivatives);
    }
    let m = p.arity();
    let n = 2 * m;
    let g = chart_metric(p);
    let ginv = invert(&g)?;
    let dg = chart_metric_derivatives(p);
    // ddg[f][b][c][d] = ∂_f ∂_b g_{cd}
    let ddg = |f: usize, b: usize, c: usize, d: usize| -> f64 {
        if (c < m) != (d < m) {
            return 0.0;
        }
        let (i, j) = (cidx(c, m), cidx(d, m));
        let d4 = jet.d4(i, j, cidx(b, m), cidx(f, m)).unwrap_or_default();
        (mu(b, m) * mu(f, m) * d4).im
    };
    let mut out = Vec::with_capacity(n);
    for f in 0..n {
        // ∂_f g^{ad} = −g^{ae} ∂_f g_{eh} g^{hd}
        let dgf = Mat::from_fn(n, n, |e, h| dg.get(f, e, h));
        let dginv = -(&ginv * dgf * &ginv);
        let mut t = Tensor3::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut v = 0.0;
                    for d in 0..n {
                        let first = dg.get(b, d, c) + dg.get(c, d, b) - dg.get(d, b, c);
                        let second = ddg(f, b, d, c) + ddg(f, c, d, b) - ddg(f, d, b, c);
                        v += dginv[(a, d)] * first + ginv[(a, d)] * second;
                    }
                    t.set(a, b, c, 0.5 * v);
                }
            }
        }
        out.push(t);
    }
    Ok(out)
}

/// Curvature of the Levi-Civita connection of `g′`. Not a connection of the
/// special structure; used to exhibit curved (incomplete) definite examples.
#[derive(Debug, Clone)]
pub struct LeviCivitaCurvature {
    pub gamma: Tensor3,
    pub riemann: Vec<f64>,
    pub ricci: Mat,
    pub scalar: f64,
    /// `scalar / 2` when the real dimension is two.
    pub gauss: Option<f64>,
}

pub fn levi_civita_curvature(geom: &Geometry<'_>, p: &SKPoint) -> Result<LeviCivitaCurvature, GeometryError> {
    p.require_nondegenerate()?;
    let n = 2 * p.arity();
    let gamma = levi_civita_field(p)?;
    let dgamma = match geom.mode {
        DerivativeMode::Exact => {
            let exact = if p.jet().fourth.is_some() {
                p.clone()
            } else {
                SKPoint::with_fourth(geom.prep, p.z())?
            };
            levi_civita_derivatives_exact(&exact)?
        }
        DerivativeMode::FiniteDifference(cfg) => {
            let field = |q: &[f64]| -> Result<Vec<f64>, GeometryError> {
                Ok(levi_civita_field(&SKPoint::at_chart(geom.prep, q)?)?.as_slice().to_vec())
            };
            fd_jacobian(field, &p.chart(), &cfg)?
                .into_iter()
                .map(|col| Tensor3::from_vec(n, col))
                .collect()
        }
    };
    let riem = riemann(&gamma, &dgamma);
    let ric = ricci(&riem, n);
    let ginv = invert(&chart_metric(p))?;
    let scalar = ginv.component_mul(&ric).sum();
    Ok(LeviCivitaCurvature {
        gamma,
        riemann: riem,
        ricci: ric,
        scalar,
        gauss: (n == 2).then_some(scalar / 2.0),
    })
}
