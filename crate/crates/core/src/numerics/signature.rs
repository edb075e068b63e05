use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{NumericsError, SymMatrix};

/// Inertia counts of a nondegenerate symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize) -> Self {
        Signature { positive, negative }
    }

    pub fn is_definite(&self) -> bool {
        self.positive == 0 || self.negative == 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// Counts eigenvalues above `tol` and below `-tol`. Any eigenvalue inside
/// `[-tol, tol]` leaves the signature undefined.
pub fn signature(m: &SymMatrix, tol: f64) -> Result<Signature, NumericsError> {
    let mut sig = Signature::new(0, 0);
    for ev in m.eigenvalues() {
        if ev > tol {
            sig.positive += 1;
        } else if ev < -tol {
            sig.negative += 1;
        } else {
            return Err(NumericsError::SignatureUndefined { eigenvalue: ev });
        }
    }
    Ok(sig)
}

/// Complex signature of a Hermitian matrix (row-major, order `n`), computed on
/// the real symmetric embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is the
/// Hermitian spectrum with every eigenvalue doubled.
pub fn hermitian_signature(h: &[Complex64], n: usize, tol: f64) -> Result<Signature, NumericsError> {
    let mut real = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = h[i * n + j];
            real[(i, j)] = v.re;
            real[(i + n, j + n)] = v.re;
            real[(i, j + n)] = -v.im;
            real[(i + n, j)] = v.im;
        }
    }
    let sig = signature(&SymMatrix::symmetrize(&real), tol)?;
    Ok(Signature::new(sig.positive / 2, sig.negative / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Mat;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(signature(&SymMatrix::identity(3), 1e-12).unwrap(), Signature::new(3, 0));
        assert_eq!(
            signature(&SymMatrix::from_diagonal(&[1.0, -1.0]), 1e-12).unwrap(),
            Signature::new(1, 1)
        );
    }

    #[test]
    fn two_by_two_against_characteristic_polynomial() {
        // Eigen oracle: roots of t² - 3t + 1 are (3 ± √5)/2, both positive.
        let m = SymMatrix::from_upper(Mat::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 1.0]));
        let ev = m.eigenvalues();
        let s5 = 5f64.sqrt();
        assert!((ev[0] - (3.0 - s5) / 2.0).abs() < 1e-14);
        assert!((ev[1] - (3.0 + s5) / 2.0).abs() < 1e-14);
        assert_eq!(signature(&m, 1e-12).unwrap(), Signature::new(2, 0));
    }

    #[test]
    fn degenerate_is_an_error() {
        let m = SymMatrix::from_diagonal(&[1.0, 1e-14]);
        assert!(matches!(
            signature(&m, 1e-12),
            Err(NumericsError::SignatureUndefined { .. })
        ));
    }

    #[test]
    fn hermitian_pair() {
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let h = [z, i, -i, z];
        assert_eq!(hermitian_signature(&h, 2, 1e-12).unwrap(), Signature::new(1, 1));
    }
}
