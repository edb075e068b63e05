//! Dense kernels, signatures, finite differences and path quadrature.
//!
//! Everything here works on tiny matrices (order ≤ 2m+1 with m ≤ 4), so the
//! algorithms are direct and dense.

mod fd;
mod matrix;
mod quadrature;
mod signature;
mod tensor;

use thiserror::Error;

pub use fd::{fd_derivative, fd_hessian, fd_jacobian, FdConfig};
pub use matrix::{complex_inf_norm, invert, pfaffian, Mat, SymMatrix};
pub use quadrature::{line_integral, GaussLegendre, PathSpec, DEFAULT_QUADRATURE_ORDER};
pub use signature::{hermitian_signature, signature, Signature};
pub use tensor::Tensor3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("signature undefined: eigenvalue {eigenvalue:e} is within tolerance of zero")]
    SignatureUndefined { eigenvalue: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid finite-difference configuration: {0}")]
    InvalidFdConfig(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("path crosses singular/degenerate locus")]
    SingularPath,
}
