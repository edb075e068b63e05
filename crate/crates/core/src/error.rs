use thiserror::Error;

use crate::dsl::{EvalError, ParseError};
use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("degenerate point: |det Im Hess F| = {det:e} ≤ {tol:e}")]
    Degenerate { det: f64, tol: f64 },
    #[error("affine chart of {0} is singular (degenerate locus)")]
    SingularChart(&'static str),
    #[error("exact derivatives need a jet with fourth derivatives")]
    MissingFourthDerivatives,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("invalid sample plan: {0}")]
    InvalidPlan(String),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
}
