//! Small dense matrix kernels.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::NumericsError;

pub type Mat = DMatrix<f64>;

/// Real symmetric matrix. Symmetry is exact: construction mirrors the upper
/// triangle into the lower one.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Mat);

impl SymMatrix {
    /// Builds from any square matrix, keeping the upper triangle.
    pub fn from_upper(m: Mat) -> Self {
        assert!(m.is_square(), "symmetric matrix must be square");
        let n = m.nrows();
        let mut s = m;
        for i in 0..n {
            for j in 0..i {
                s[(i, j)] = s[(j, i)];
            }
        }
        SymMatrix(s)
    }

    /// Builds from a matrix that should already be symmetric up to rounding;
    /// the result is the exact symmetric part.
    pub fn symmetrize(m: &Mat) -> Self {
        SymMatrix((m + m.transpose()) * 0.5)
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(Mat::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        SymMatrix(Mat::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &Mat {
        &self.0
    }

    pub fn into_matrix(self) -> Mat {
        self.0
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn inverse(&self) -> Result<SymMatrix, NumericsError> {
        invert(&self.0).map(|inv| SymMatrix::symmetrize(&inv))
    }

    /// `Cᵀ M C`.
    pub fn congruence(&self, c: &Mat) -> SymMatrix {
        SymMatrix::symmetrize(&(c.transpose() * &self.0 * c))
    }

    /// Max-norm of entries.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }
}

pub fn invert(m: &Mat) -> Result<Mat, NumericsError> {
    m.clone()
        .try_inverse()
        .filter(|inv| inv.iter().all(|v| v.is_finite()))
        .ok_or(NumericsError::Singular)
}

/// Induced ∞-norm (max absolute row sum) of a complex matrix given row-major.
pub fn complex_inf_norm(entries: &[Complex64], n: usize) -> f64 {
    (0..n)
        .map(|i| (0..n).map(|j| entries[i * n + j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Pfaffian of an antisymmetric matrix of even order, by expansion along the
/// first row. Orders here are at most 8.
pub fn pfaffian(a: &Mat) -> f64 {
    let n = a.nrows();
    assert!(a.is_square() && n % 2 == 0, "pfaffian needs an even square matrix");
    let idx: Vec<usize> = (0..n).collect();
    pfaffian_rec(a, &idx)
}

fn pfaffian_rec(a: &Mat, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut sum = 0.0;
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&j| j != idx[k]).collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * a[(first, idx[k])] * pfaffian_rec(a, &rest);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_upper_mirrors() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 2.0, 99.0, 3.0]);
        let s = SymMatrix::from_upper(m);
        assert_eq!(s.get(1, 0), 2.0);
    }

    #[test]
    fn pfaffian_small() {
        let j = Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(pfaffian(&j), -1.0);
        // Pf² = det for a random antisymmetric 4×4.
        let mut a = Mat::zeros(4, 4);
        let vals = [0.3, -1.2, 0.7, 2.0, -0.4, 1.5];
        let mut t = 0;
        for i in 0..4 {
            for k in i + 1..4 {
                a[(i, k)] = vals[t];
                a[(k, i)] = -vals[t];
                t += 1;
            }
        }
        let pf = pfaffian(&a);
        assert!((pf * pf - a.determinant()).abs() < 1e-12);
        // a12 a34 - a13 a24 + a14 a23
        let direct = 0.3 * 1.5 - (-1.2) * (-0.4) + 0.7 * 2.0;
        assert!((pf - direct).abs() < 1e-14);
    }

    #[test]
    fn singular_inverse_fails() {
        let m = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(invert(&m).is_err());
    }
}
