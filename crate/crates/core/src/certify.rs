//! Full residual sweep over a point set: every special Kähler identity plus
//! the parabolic-sphere certificates.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::kahler::{Geometry, PointResiduals, SKPoint};
use crate::numerics::FdConfig;
use crate::report::{ResidualKind, ResidualReport, Tolerances};
use crate::sphere::{fd_potential_hessian, spreads_of, ConstancyValues, DarbouxFrame, Screening};
use crate::GeometryError;

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub screening: Screening,
    pub tolerances: Tolerances,
    /// Stencil for the finite-difference Hessian of `u`.
    pub potential_fd: FdConfig,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            screening: Screening::default(),
            tolerances: Tolerances::default(),
            potential_fd: crate::sphere::potential_fd_config(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Certification {
    pub report: ResidualReport,
    pub plan_points: usize,
    /// Plan indices rejected by screening.
    pub degenerate: Vec<usize>,
    /// Nondegenerate points whose evaluation failed (e.g. a stencil left the domain).
    pub errors: Vec<(usize, String)>,
}

impl Certification {
    pub fn evaluated(&self) -> usize {
        self.report.samples
    }

    pub fn degenerate_fraction(&self) -> f64 {
        if self.plan_points == 0 {
            return 1.0;
        }
        self.degenerate.len() as f64 / self.plan_points as f64
    }

    pub fn passes(&self) -> bool {
        self.errors.is_empty() && self.report.all_pass()
    }
}

enum Outcome {
    Degenerate,
    Failed(String),
    Done(Box<(ResidualReport, ConstancyValues)>),
}

fn certify_point(geom: &Geometry<'_>, z: &[Complex64], opts: &CertifyOptions) -> Result<Option<(ResidualReport, ConstancyValues)>, GeometryError> {
    let p = geom.point(z)?;
    if !opts.screening.accepts(&p) {
        return Ok(None);
    }
    let mut r = ResidualReport::new(opts.tolerances.clone());
    r.samples = 1;
    let res = PointResiduals::evaluate(geom, &p)?;
    r.record(ResidualKind::Lagrangian, res.lagrangian);
    r.record(ResidualKind::Conjugacy, res.conjugacy);
    r.record(ResidualKind::NablaOmega, res.nabla_omega);
    r.record(ResidualKind::DNablaJ, res.d_nabla_j);
    r.record(ResidualKind::Nijenhuis, res.nijenhuis);
    r.record(ResidualKind::TorsionNabla, res.torsion_nabla);
    r.record(ResidualKind::CurvatureNabla, res.curvature_nabla);
    r.record(ResidualKind::TorsionNablaJ, res.torsion_nabla_j);
    r.record(ResidualKind::CurvatureNablaJ, res.curvature_nabla_j);
    r.record(ResidualKind::Shape, res.shape);
    r.record(ResidualKind::ShapeLambda, res.shape_lambda);

    let frame = DarbouxFrame::new(&SKPoint::new(geom.prep, z)?)?;
    r.record(ResidualKind::MongeAmpere, frame.det_g() - 1.0);
    let fd = fd_potential_hessian(geom.prep, z, &opts.potential_fd)?;
    r.record(ResidualKind::MongeAmpereFd, fd.determinant() - 1.0);
    r.record(
        ResidualKind::HessianConsistency,
        (fd.as_matrix() - frame.g.as_matrix()).amax(),
    );
    Ok(Some((r, ConstancyValues::new(&frame))))
}

/// Runs the full suite over `points`. Points are evaluated in parallel; the
/// result does not depend on evaluation order.
pub fn certify(geom: &Geometry<'_>, points: &[Vec<Complex64>], opts: &CertifyOptions) -> Certification {
    let outcomes: Vec<Outcome> = points
        .par_iter()
        .map(|z| match certify_point(geom, z, opts) {
            Ok(Some(done)) => Outcome::Done(Box::new(done)),
            Ok(None) => Outcome::Degenerate,
            Err(GeometryError::Degenerate { .. }) => Outcome::Degenerate,
            Err(e) => Outcome::Failed(e.to_string()),
        })
        .collect();

    let mut report = ResidualReport::new(opts.tolerances.clone());
    let mut degenerate = Vec::new();
    let mut errors = Vec::new();
    let mut constancy = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Degenerate => degenerate.push(i),
            Outcome::Failed(msg) => errors.push((i, msg)),
            Outcome::Done(done) => {
                let (r, c) = *done;
                report = report.merge(&r);
                constancy.push(c);
            }
        }
    }
    if let Ok(spreads) = spreads_of(&constancy) {
        report.record(ResidualKind::ConstancyDetG, spreads.det_g);
        report.record(ResidualKind::ConstancyOmega, spreads.omega);
        report.record(ResidualKind::ConstancyVolume, spreads.volume_ratio);
    }
    Certification {
        report,
        plan_points: points.len(),
        degenerate,
        errors,
    }
}
