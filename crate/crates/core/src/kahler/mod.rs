//! The special Kähler structure induced by a prepotential: the point data,
//! the connections `∇` and `∇^J`, and the residuals of every identity they
//! are required to satisfy.

mod connection;
mod curvature;
mod frame;
mod point;
mod residuals;

pub use connection::{christoffel_derivatives, christoffels, AffineChart, ConnectionField, ConnectionKind};
pub use curvature::{
    curvature_residual, levi_civita, levi_civita_curvature, levi_civita_field, ricci, riemann, torsion_residual,
    LeviCivitaCurvature,
};
pub use frame::{chart_kahler_form, chart_metric, chart_metric_derivatives, DerivativeMode, Geometry, LocalFrame};
pub use point::{ambient_hermitian_form, chart_to_z, lagrangian_residual_of, z_to_chart, SKPoint, DEGENERACY_SCALE};
pub use residuals::{
    conjugacy_residual, conjugacy_residual_of, curvature_torsion, d_nabla_j_residual_of, levi_civita_at, nijenhuis,
    nijenhuis_of, parallel_form_residual_of, shape_tensor, shape_tensor_of, special_residuals, PointResiduals,
    ShapeTensor,
};
