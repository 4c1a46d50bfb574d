//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

use crate::{Complex64, Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// `⟨w, z⟩ = Σ w_j · conj(z_j)`, linear in the first argument.
pub fn inner(w: &CVector, z: &CVector) -> Complex64 {
    w.iter().zip(z.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(z: &CVector) -> f64 {
    libm::sqrt(z.iter().map(|v| v.norm_sqr()).sum())
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn vec_max_abs(v: &CVector) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> alloc::vec::Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return alloc::vec::Vec::new();
    }
    let mut s: alloc::vec::Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value `‖m‖₂`.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Spectral norm of a Hermitian matrix via its eigenvalues.
pub fn hermitian_spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().symmetric_eigenvalues().iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix (only the lower triangle is read).
pub fn hermitian_eigenvalues(m: &CMatrix) -> alloc::vec::Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

/// `max |m - m†|` entrywise.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `max |m†m - I|` entrywise.
pub fn unitary_residual(m: &CMatrix) -> f64 {
    let n = m.ncols();
    max_abs(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let s = singular_values(m);
    let (Some(&hi), Some(&lo)) = (s.first(), s.last()) else {
        return Err(Error::SingularMatrix);
    };
    if !(lo > hi * 1e-12) {
        return Err(Error::SingularMatrix);
    }
    m.clone().try_inverse().ok_or(Error::SingularMatrix)
}

pub fn is_invertible(m: &CMatrix) -> bool {
    inverse(m).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_product_conjugates_second_slot() {
        let w = CVector::from_vec(alloc::vec![c(0.0, 1.0), c(1.0, 0.0)]);
        let z = CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.0, 1.0)]);
        // i·1 + 1·(-i) = 0
        assert_eq!(inner(&w, &z), c(0.0, 0.0));
        assert_eq!(inner(&z, &z), c(2.0, 0.0));
    }

    #[test]
    fn skew_example_norm_and_inverse() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0)]);
        let s = singular_values(&m);
        assert!((s[0] - 0.5).abs() < 1e-15 && (s[1] - 0.5).abs() < 1e-15);
        let inv = inverse(&m).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(max_abs(&(inv - expected)) < 1e-15);
        assert!(hermitian_residual(&m) > 0.9);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(inverse(&m), Err(Error::SingularMatrix));
        assert!((spectral_norm(&m) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hermitian_norm_agrees_with_svd() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(-3.0, 0.0)]);
        assert!((hermitian_spectral_norm(&m) - spectral_norm(&m)).abs() < 1e-12);
    }
}
