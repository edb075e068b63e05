//! Christoffel symbols of the flat connection `∇` and its conjugate `∇^J` in
//! the working chart `ξ = (x, v)`.
//!
//! Both connections are flat with known affine coordinates: `(x, y)` with
//! `y = Re ∂F/∂z` for `∇`, and `(v, s)` with `s = Im ∂F/∂z` for `∇^J`. The
//! symbols follow from the chart change `Γ^a_{bc} = (∂ξ^a/∂q^d) ∂²q^d/∂ξ^b∂ξ^c`.
//! Every real chart derivative of `Re/Im F_I` is `Re/Im (μ F_{I k})` where `k`
//! is the complex index of the chart axis and `μ` is `1` on `x` axes and `i`
//! on `v` axes, so all derivatives of `q` come straight from the jet.

use num_complex::Complex64;

use super::point::SKPoint;
use crate::dsl::HoloJet;
use crate::numerics::{invert, Mat, Tensor3};
use crate::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnectionKind {
    /// The flat special connection `∇`.
    Nabla,
    /// `∇^J = J ∇ J⁻¹`.
    NablaJ,
}

impl ConnectionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConnectionKind::Nabla => "nabla",
            ConnectionKind::NablaJ => "nablaJ",
        }
    }

    fn part(self, c: Complex64) -> f64 {
        match self {
            ConnectionKind::Nabla => c.re,
            ConnectionKind::NablaJ => c.im,
        }
    }
}

/// Christoffel symbols `Γ^a_{bc}` at one point, stored `[a][b][c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionField {
    pub kind: ConnectionKind,
    pub gamma: Tensor3,
}

#[inline]
pub(crate) fn mu(e: usize, m: usize) -> Complex64 {
    if e < m {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

#[inline]
pub(crate) fn cidx(e: usize, m: usize) -> usize {
    e % m
}

/// First and second derivatives of a connection's affine coordinates with
/// respect to the working chart.
#[derive(Debug, Clone)]
pub struct AffineChart {
    pub kind: ConnectionKind,
    /// `T[d][e] = ∂q^d/∂ξ^e`.
    pub jacobian: Mat,
    /// `H[d][b][c] = ∂²q^d/∂ξ^b∂ξ^c`.
    pub hessians: Tensor3,
}

impl AffineChart {
    pub fn new(kind: ConnectionKind, jet: &HoloJet) -> Self {
        let m = jet.arity();
        let n = 2 * m;
        let mut jacobian = Mat::zeros(n, n);
        let mut hessians = Tensor3::zeros(n);
        for e in 0..n {
            // z-block: q^d = Re/Im z_d
            let d = cidx(e, m);
            jacobian[(d, e)] = kind.part(mu(e, m));
            for i in 0..m {
                jacobian[(m + i, e)] = kind.part(mu(e, m) * jet.d2(i, cidx(e, m)));
            }
        }
        for i in 0..m {
            for b in 0..n {
                for c in b..n {
                    let v = kind.part(mu(b, m) * mu(c, m) * jet.d3(i, cidx(b, m), cidx(c, m)));
                    hessians.set(m + i, b, c, v);
                    hessians.set(m + i, c, b, v);
                }
            }
        }
        AffineChart {
            kind,
            jacobian,
            hessians,
        }
    }

    pub fn inverse_jacobian(&self) -> Result<Mat, GeometryError> {
        invert(&self.jacobian).map_err(|_| GeometryError::SingularChart(self.kind.name()))
    }

    pub fn christoffels(&self) -> Result<ConnectionField, GeometryError> {
        let tinv = self.inverse_jacobian()?;
        Ok(ConnectionField {
            kind: self.kind,
            gamma: contract_first(&tinv, &self.hessians),
        })
    }
}

/// `out[a][b][c] = Σ_d M[a][d] t[d][b][c]`.
fn contract_first(mat: &Mat, t: &Tensor3) -> Tensor3 {
    let n = t.dim();
    let mut out = Tensor3::zeros(n);
    for a in 0..n {
        for d in 0..n {
            let w = mat[(a, d)];
            if w == 0.0 {
                continue;
            }
            for b in 0..n {
                for c in 0..n {
                    out.add(a, b, c, w * t.get(d, b, c));
                }
            }
        }
    }
    out
}

/// Christoffel symbols of `kind` at `p`.
pub fn christoffels(kind: ConnectionKind, p: &SKPoint) -> Result<ConnectionField, GeometryError> {
    AffineChart::new(kind, p.jet()).christoffels()
}

/// Exact `∂_f Γ^a_{bc}` from fourth derivatives of `F`, returned as one
/// tensor per direction `f`. Uses `∂_f Γ = T⁻¹ (∂_f H − (∂_f T) Γ)` with
/// `(∂_f T)^d_e = H^d_{ef}`.
pub fn christoffel_derivatives(kind: ConnectionKind, p: &SKPoint) -> Result<Vec<Tensor3>, GeometryError> {
    let jet = p.jet();
    if jet.fourth.is_none() {
        return Err(GeometryError::MissingFourthDerivatives);
    }
    let m = jet.arity();
    let n = 2 * m;
    let chart = AffineChart::new(kind, jet);
    let tinv = chart.inverse_jacobian()?;
    let gamma = contract_first(&tinv, &chart.hessians);
    let mut out = Vec::with_capacity(n);
    for f in 0..n {
        let mut inner = Tensor3::zeros(n);
        for i in 0..m {
            let d = m + i;
            for b in 0..n {
                for c in 0..n {
                    let prod = mu(b, m) * mu(c, m) * mu(f, m);
                    let d4 = jet
                        .d4(i, cidx(b, m), cidx(c, m), cidx(f, m))
                        .unwrap_or_default();
                    inner.set(d, b, c, kind.part(prod * d4));
                }
            }
        }
        for d in 0..n {
            for e in 0..n {
                let dt = chart.hessians.get(d, e, f);
                if dt == 0.0 {
                    continue;
                }
                for b in 0..n {
                    for c in 0..n {
                        inner.add(d, b, c, -dt * gamma.get(e, b, c));
                    }
                }
            }
        }
        out.push(contract_first(&tinv, &inner));
    }
    Ok(out)
}
