//! Seeded random points and matrices for sampled checks.

use nalgebra::linalg::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, CMatrix, CVector};
use crate::Complex64;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent real and imaginary parts, variance 1/2 each).
pub fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    // Box-Muller; 1 - u keeps the logarithm finite.
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen::<f64>();
    let r = libm::sqrt(-libm::log(u));
    let th = 2.0 * core::f64::consts::PI * v;
    Complex64::new(r * libm::cos(th), r * libm::sin(th))
}

/// Uniform point in the closed ball `|z| ≤ radius` of `ℂⁿ`.
pub fn point_in_ball<R: Rng>(rng: &mut R, n: usize, radius: f64) -> CVector {
    let g = CVector::from_fn(n, |_, _| complex_normal(rng));
    let nrm = linalg::norm(&g);
    let u: f64 = rng.gen();
    let r = radius * libm::pow(u, 1.0 / (2.0 * n as f64));
    if nrm == 0.0 {
        return CVector::zeros(n);
    }
    g * Complex64::new(r / nrm, 0.0)
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of `R`'s diagonal removed.
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let qr = QR::new(gaussian_matrix(rng, n));
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { d / d.norm() };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random matrix with spectral norm exactly `norm`.
pub fn matrix_with_norm<R: Rng>(rng: &mut R, n: usize, norm: f64) -> CMatrix {
    let g = gaussian_matrix(rng, n);
    let s = linalg::spectral_norm(&g);
    g * Complex64::new(norm / s, 0.0)
}

/// Random contraction with spectral norm uniform in `[0.1, 1]`.
pub fn contraction<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let norm = 0.1 + 0.9 * rng.gen::<f64>();
    matrix_with_norm(rng, n, norm)
}

/// Random Hermitian matrix with spectral norm uniform in `[0.1, 1]`.
pub fn hermitian_contraction<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n);
    let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let s = linalg::hermitian_spectral_norm(&h);
    let norm = 0.1 + 0.9 * rng.gen::<f64>();
    h * Complex64::new(norm / s, 0.0)
}

pub fn unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    let th = 2.0 * core::f64::consts::PI * rng.gen::<f64>();
    Complex64::new(libm::cos(th), libm::sin(th))
}
