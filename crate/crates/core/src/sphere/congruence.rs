//! Equiaffine congruence of a quadratic prepotential's sphere to the standard
//! paraboloid `h = Σ p_i²`.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use crate::dsl::Prepotential;
use crate::kahler::SKPoint;
use crate::numerics::{signature, Mat, Signature};
use crate::GeometryError;

use super::darboux::{darboux, metric_g};
use super::immerse::ImmersionSample;

#[derive(Debug, Clone, PartialEq)]
pub enum Congruence {
    /// Affine map `w ↦ linear · w + translation` on `R^{2m+1}` with coordinates
    /// `(q, h)` carrying the graph of `u` onto `{h = Σ p_i²}`.
    Elliptic {
        linear: Mat,
        translation: Vec<f64>,
        /// Cholesky factor of `G`.
        factor: Mat,
        determinant: f64,
        residual: f64,
    },
    /// Indefinite `G`: congruent to the paraboloid of the same signature, no
    /// elliptic map is built.
    Indefinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceResult {
    pub applicable: bool,
    pub signature: Option<Signature>,
    pub congruence: Option<Congruence>,
    pub note: String,
}

fn not_applicable(signature: Option<Signature>, note: impl Into<String>, congruence: Option<Congruence>) -> CongruenceResult {
    CongruenceResult {
        applicable: false,
        signature,
        congruence,
        note: note.into(),
    }
}

/// Builds the unimodular map `q ↦ λ Lᵀ q`, `h ↦ 2λ² (h − bᵀq − c)` with
/// `G = L Lᵀ` and `λ = 2^{−1/(2m+2)}`, where `u = ½ qᵀ G q + bᵀ q + c` is fixed
/// by the data at `base` (with `u(base) = 0`). The residual is
/// `max |h' − |p|²|` over `samples`.
pub fn paraboloid_congruence(
    prep: &Prepotential,
    base: &[Complex64],
    samples: &[ImmersionSample],
) -> Result<CongruenceResult, GeometryError> {
    let p = SKPoint::new(prep, base)?;
    p.require_nondegenerate()?;
    let g = metric_g(&p)?;
    let sig = signature(&g, 1e-12).ok();
    if !prep.is_quadratic() {
        return Ok(not_applicable(sig, "prepotential is not quadratic", None));
    }
    match sig {
        Some(s) if s.is_positive_definite() => {}
        Some(s) => {
            return Ok(not_applicable(
                sig,
                format!("indefinite or negative G with signature {s}: congruent to the standard paraboloid of that signature; no elliptic congruence"),
                Some(Congruence::Indefinite),
            ))
        }
        None => return Ok(not_applicable(None, "G has undefined signature", None)),
    }

    let n = 2 * p.arity();
    let gm = g.as_matrix().clone();
    let chol = Cholesky::new(gm.clone()).ok_or(GeometryError::Numerics(crate::numerics::NumericsError::Singular))?;
    let l = chol.l();

    let (x, y) = darboux(&p);
    let q0 = DVector::from_iterator(n, x.into_iter().chain(y));
    // ∇u = (s, −v) in Darboux coordinates.
    let grad_u = DVector::from_iterator(
        n,
        p.jet().grad.iter().map(|w| w.im).chain(base.iter().map(|z| -z.im)),
    );
    let b = &grad_u - &gm * &q0;
    let c = -0.5 * q0.dot(&(&gm * &q0)) - b.dot(&q0);

    let lambda = 2f64.powf(-1.0 / (n as f64 + 2.0));
    let mut linear = DMatrix::zeros(n + 1, n + 1);
    linear.view_mut((0, 0), (n, n)).copy_from(&(l.transpose() * lambda));
    for k in 0..n {
        linear[(n, k)] = -2.0 * lambda * lambda * b[k];
    }
    linear[(n, n)] = 2.0 * lambda * lambda;
    let mut translation = vec![0.0; n + 1];
    translation[n] = -2.0 * lambda * lambda * c;
    let determinant = linear.determinant();

    let mut residual = 0.0f64;
    for s in samples {
        let w = DVector::from_vec(s.ambient());
        let image = &linear * w + DVector::from_column_slice(&translation);
        let height = image[n];
        let norm2: f64 = image.rows(0, n).iter().map(|v| v * v).sum();
        residual = residual.max((height - norm2).abs());
    }

    Ok(CongruenceResult {
        applicable: true,
        signature: sig,
        congruence: Some(Congruence::Elliptic {
            linear,
            translation,
            factor: l,
            determinant,
            residual,
        }),
        note: "affinely congruent to the paraboloid".into(),
    })
}
