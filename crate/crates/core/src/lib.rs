//! Special Kähler geometry of a holomorphic prepotential `F(z_1..z_m)` and its
//! realization as a parabolic affine sphere.
//!
//! Pipeline: [`dsl`] parses and differentiates `F`, [`kahler`] builds the
//! connections and residuals in the chart `(x, v) = (Re z, Im z)`, [`sphere`]
//! passes to Darboux coordinates and integrates the potential, and
//! [`certify`] sweeps a point set.

pub mod bundled;
pub mod certify;
pub mod dsl;
mod error;
pub mod kahler;
pub mod numerics;
pub mod report;
pub mod sphere;

pub use error::GeometryError;

pub use bundled::{BundledCase, BUNDLED};
pub use certify::{certify, Certification, CertifyOptions};
pub use dsl::{HoloJet, ParseError, Prepotential};
pub use kahler::{ConnectionKind, DerivativeMode, Geometry, LocalFrame, PointResiduals, SKPoint};
pub use numerics::{FdConfig, NumericsError, Signature, SymMatrix};
pub use report::{ResidualKind, ResidualReport, Tolerances};
pub use sphere::{Grid, GridAxis, Immersion, ImmersionSample, Screening};

pub use num_complex::Complex64;
