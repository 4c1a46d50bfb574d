//! Symbols `(U, Γ)` of weighted composition operators `C_{U,Γ} f = U·(f∘Γ)`
//! and their finite sections in the orthonormal monomial basis.

use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::KernelEvaluator;
use crate::linalg::{self, CMatrix, CVector};
use crate::multiindex::{MonomialBasis, MultiIndex};
use crate::polynomial::{monomial_value, Polynomial};
use crate::{Complex64, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `Γ(z) = C z + shift`.
///
/// The shift is stored literally; for maps written as `Cz - D` use
/// [`AffineMap::with_subtracted_shift`].
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    linear: CMatrix,
    shift: CVector,
}

impl AffineMap {
    pub fn new(linear: CMatrix, shift: CVector) -> Result<Self> {
        let n = linear.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("affine map needs n ≥ 1".into()));
        }
        if linear.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: linear.ncols() });
        }
        if shift.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: shift.len() });
        }
        Ok(Self { linear, shift })
    }

    pub fn linear(c: CMatrix) -> Result<Self> {
        let n = c.nrows();
        Self::new(c, CVector::zeros(n))
    }

    /// `Γ ≡ d`.
    pub fn constant(d: CVector) -> Result<Self> {
        let n = d.len();
        Self::new(CMatrix::zeros(n, n), d)
    }

    pub fn identity(n: usize) -> Self {
        Self { linear: CMatrix::identity(n, n), shift: CVector::zeros(n) }
    }

    /// `Γ(z) = C z - d`.
    pub fn with_subtracted_shift(c: CMatrix, d: CVector) -> Result<Self> {
        Self::new(c, -d)
    }

    pub fn n(&self) -> usize {
        self.shift.len()
    }

    pub fn linear_part(&self) -> &CMatrix {
        &self.linear
    }

    pub fn shift(&self) -> &CVector {
        &self.shift
    }

    pub fn eval(&self, z: &CVector) -> Result<CVector> {
        if z.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: z.len() });
        }
        Ok(&self.linear * z + &self.shift)
    }

    /// `‖C‖₂`.
    pub fn operator_norm(&self) -> f64 {
        linalg::spectral_norm(&self.linear)
    }

    pub fn shift_norm(&self) -> f64 {
        linalg::norm(&self.shift)
    }

    /// The coordinate functions `Γ_j` as degree-one polynomials.
    pub fn coordinate_polynomials(&self) -> Vec<Polynomial> {
        let n = self.n();
        (0..n)
            .map(|j| {
                let mut p = Polynomial::constant(n, self.shift[j]);
                for k in 0..n {
                    p.add_term(MultiIndex::unit(n, k), self.linear[(j, k)]);
                }
                p
            })
            .collect()
    }
}

/// The multiplier `U` in the forms the characterizations produce.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSymbol {
    Zero,
    Constant(Complex64),
    /// `U(z) = alpha · K_center(z)`.
    KernelMultiple { alpha: Complex64, center: CVector },
    Polynomial(Polynomial),
}

impl WeightSymbol {
    pub fn one() -> Self {
        WeightSymbol::Constant(ONE)
    }

    pub fn eval(&self, z: &CVector, ev: &KernelEvaluator) -> Result<Complex64> {
        match self {
            WeightSymbol::Zero => Ok(ZERO),
            WeightSymbol::Constant(c) => Ok(*c),
            WeightSymbol::KernelMultiple { alpha, center } => {
                Ok(alpha * ev.kernel_eval(center, z)?.value)
            }
            WeightSymbol::Polynomial(p) => p.eval(z),
        }
    }

    /// Total degree, `None` when `U` is a genuine (non-polynomial) kernel multiple.
    pub fn degree(&self) -> Option<usize> {
        match self {
            WeightSymbol::Zero | WeightSymbol::Constant(_) => Some(0),
            WeightSymbol::Polynomial(p) => Some(p.degree()),
            WeightSymbol::KernelMultiple { alpha, center } => {
                (*alpha == ZERO || center.iter().all(|v| *v == ZERO)).then_some(0)
            }
        }
    }

    /// `(α, q)` with `U = α·K_q`, when that is visible from the representation.
    /// A constant `u` is `u·c_{n-1}·K_0`.
    pub fn kernel_form(&self, ev: &KernelEvaluator) -> Option<(Complex64, CVector)> {
        let n = ev.n();
        match self {
            WeightSymbol::Zero => Some((ZERO, CVector::zeros(n))),
            WeightSymbol::Constant(c) => Some((c * ev.c_n_minus_1(), CVector::zeros(n))),
            WeightSymbol::KernelMultiple { alpha, center } => Some((*alpha, center.clone())),
            WeightSymbol::Polynomial(_) => None,
        }
    }

    /// Taylor polynomial of `U` up to total degree `max_degree`.
    pub fn to_polynomial(&self, ev: &KernelEvaluator, max_degree: usize) -> Result<Polynomial> {
        let n = ev.n();
        match self {
            WeightSymbol::Zero => Ok(Polynomial::zero(n)),
            WeightSymbol::Constant(c) => Ok(Polynomial::constant(n, *c)),
            WeightSymbol::Polynomial(p) => {
                if p.n() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: p.n() });
                }
                Ok(p.truncate(max_degree))
            }
            WeightSymbol::KernelMultiple { alpha, center } => {
                let basis = MonomialBasis::new(n, max_degree);
                let coeffs = ev.kernel_coefficients(center, &basis)?;
                Polynomial::from_terms(n, basis.indices().iter().cloned().zip(coeffs.into_iter().map(|c| c * alpha)))
            }
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        let found = match self {
            WeightSymbol::KernelMultiple { center, .. } => center.len(),
            WeightSymbol::Polynomial(p) => p.n(),
            _ => n,
        };
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
        Ok(())
    }
}

/// `U·(f∘Γ)`, exact on coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum Image {
    Polynomial(Polynomial),
    /// `alpha·K_center·factor`, kept unexpanded.
    KernelProduct { alpha: Complex64, center: CVector, factor: Polynomial },
}

impl Image {
    pub fn eval(&self, z: &CVector, ev: &KernelEvaluator) -> Result<Complex64> {
        match self {
            Image::Polynomial(p) => p.eval(z),
            Image::KernelProduct { alpha, center, factor } => {
                Ok(alpha * ev.kernel_eval(center, z)?.value * factor.eval(z)?)
            }
        }
    }
}

/// `C_{U,Γ} f = U·(f∘Γ)`.
pub fn apply(u: &WeightSymbol, g: &AffineMap, f: &Polynomial, max_degree: usize) -> Result<Image> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: f.n() });
    }
    u.check_dim(g.n())?;
    let composed = f.substitute(&g.coordinate_polynomials())?;
    let image = match u {
        WeightSymbol::Zero => Polynomial::zero(g.n()),
        WeightSymbol::Constant(c) => composed.scale(*c),
        WeightSymbol::Polynomial(p) => p.mul(&composed),
        WeightSymbol::KernelMultiple { alpha, center } => {
            if composed.degree() > max_degree {
                return Err(Error::DegreeOverflow { degree: composed.degree(), max: max_degree });
            }
            return Ok(Image::KernelProduct { alpha: *alpha, center: center.clone(), factor: composed });
        }
    };
    if image.degree() > max_degree {
        return Err(Error::DegreeOverflow { degree: image.degree(), max: max_degree });
    }
    Ok(Image::Polynomial(image))
}

/// `C*_{U,Γ} K_z = conj(U(z)) · K_{Γ(z)}`, returned as `(conj(U(z)), Γ(z))`.
pub fn adjoint_on_kernel(
    u: &WeightSymbol,
    g: &AffineMap,
    z: &CVector,
    ev: &KernelEvaluator,
) -> Result<(Complex64, CVector)> {
    u.check_dim(g.n())?;
    Ok((u.eval(z, ev)?.conj(), g.eval(z)?))
}

/// The finite section of `C_{U,Γ}` on monomials of degree `≤ N`:
/// `M[β, α] = ⟨C_{U,Γ} e_α, e_β⟩` with `e_α = z^α / ‖z^α‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    basis: MonomialBasis,
    matrix: CMatrix,
    guard: usize,
}

impl TruncatedOperator {
    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn index(&self) -> &[MultiIndex] {
        self.basis.indices()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Degrees above `N - guard` may carry truncation artifacts.
    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Number of basis elements of degree `≤ N - guard`.
    pub fn block_len(&self) -> usize {
        self.block_len_for(self.guard)
    }

    fn block_len_for(&self, guard: usize) -> usize {
        let top = self.max_degree().saturating_sub(guard);
        self.basis.count_below_degree(top + 1)
    }

    /// Orthonormal coefficients `⟨f, e_β⟩ = f_β ‖z^β‖` of a polynomial.
    pub fn coefficients_of(&self, f: &Polynomial, ev: &KernelEvaluator) -> Result<CVector> {
        let mut v = CVector::zeros(self.basis.len());
        for (a, c) in f.terms() {
            let Some(i) = self.basis.rank(a.exponents()) else {
                return Err(Error::DegreeOverflow { degree: a.degree(), max: self.max_degree() });
            };
            v[i] = c * libm::sqrt(ev.monomial_norm_sq(a)?);
        }
        Ok(v)
    }

    /// Orthonormal coefficients `⟨K_z, e_β⟩ = conj(z^β)/‖z^β‖` of `K_z` up to degree `N`.
    pub fn kernel_vector(&self, z: &CVector, ev: &KernelEvaluator) -> Result<CVector> {
        if z.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: z.len() });
        }
        let mut v = CVector::zeros(self.basis.len());
        for (i, b) in self.basis.indices().iter().enumerate() {
            v[i] = monomial_value(b, z).conj() / libm::sqrt(ev.monomial_norm_sq(b)?);
        }
        Ok(v)
    }
}

/// Assembles the finite section of `C_{U,Γ}` up to total degree `max_degree`.
///
/// Entries are exact up to the truncation of a kernel multiplier `U` at
/// degree `max_degree`, which never affects rows of degree `≤ max_degree`.
pub fn truncated_matrix(
    u: &WeightSymbol,
    g: &AffineMap,
    ev: &KernelEvaluator,
    max_degree: usize,
) -> Result<TruncatedOperator> {
    let n = g.n();
    if ev.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: ev.n() });
    }
    u.check_dim(n)?;
    let basis = MonomialBasis::new(n, max_degree);
    let len = basis.len();
    let norms: Vec<f64> = basis
        .indices()
        .iter()
        .map(|a| ev.monomial_norm_sq(a).map(libm::sqrt))
        .collect::<Result<_>>()?;

    // succ[i*n + k] = rank(α_i + e_k), when still inside the basis.
    let mut succ = vec![None; len * n];
    let mut buf = vec![0u32; n];
    for (i, a) in basis.indices().iter().enumerate() {
        for k in 0..n {
            buf.copy_from_slice(a.exponents());
            buf[k] += 1;
            succ[i * n + k] = basis.rank(&buf);
        }
    }

    // Dense multiplier coefficients.
    let u_poly = u.to_polynomial(ev, max_degree)?;
    let u_terms: Vec<(usize, Complex64)> = u_poly
        .terms()
        .map(|(a, c)| (basis.rank(a.exponents()).expect("truncated to the basis degree"), *c))
        .collect();

    // images[i] = z^{α_i} ∘ Γ, built from the image of α_i - e_j times Γ_j.
    let gamma = g.linear_part();
    let shift = g.shift();
    let mut images: Vec<Vec<Complex64>> = Vec::with_capacity(len);
    images.push({
        let mut v = vec![ZERO; len];
        v[0] = ONE;
        v
    });
    for i in 1..len {
        let a = basis.get(i);
        let j = a.exponents().iter().position(|&e| e > 0).expect("nonconstant monomial");
        buf.copy_from_slice(a.exponents());
        buf[j] -= 1;
        let prev = &images[basis.rank(&buf).expect("lower degree is in the basis")];
        let mut next = vec![ZERO; len];
        for (b, &val) in prev.iter().enumerate() {
            if val == ZERO {
                continue;
            }
            next[b] += val * shift[j];
            for k in 0..n {
                let cjk = gamma[(j, k)];
                if cjk != ZERO {
                    if let Some(t) = succ[b * n + k] {
                        next[t] += val * cjk;
                    }
                }
            }
        }
        images.push(next);
    }

    let mut matrix = CMatrix::zeros(len, len);
    let mut sum_buf = vec![0u32; n];
    for (col, img) in images.iter().enumerate() {
        let mut h = vec![ZERO; len];
        if let [(0, c)] = u_terms.as_slice() {
            for (b, v) in img.iter().enumerate() {
                h[b] = v * c;
            }
        } else {
            for &(ui, uc) in &u_terms {
                let ua = basis.get(ui).exponents();
                for (b, v) in img.iter().enumerate() {
                    if *v == ZERO {
                        continue;
                    }
                    for (s, (x, y)) in sum_buf.iter_mut().zip(ua.iter().zip(basis.get(b).exponents())) {
                        *s = x + y;
                    }
                    if let Some(t) = basis.rank(&sum_buf) {
                        h[t] += uc * v;
                    }
                }
            }
        }
        for (row, v) in h.into_iter().enumerate() {
            if v != ZERO {
                matrix[(row, col)] = v * norms[row] / norms[col];
            }
        }
    }

    let half = max_degree / 2;
    let guard = if g.shift_norm() == 0.0 { u.degree().map_or(half, |d| d.min(half)) } else { half };
    Ok(TruncatedOperator { basis, matrix, guard })
}

fn block(m: &CMatrix, len: usize) -> CMatrix {
    m.view((0, 0), (len, len)).into_owned()
}

/// `‖(M - M†)‖₂` on the guard block.
pub fn defect_self_adjoint(t: &TruncatedOperator) -> f64 {
    let len = t.block_len();
    let m = block(&t.matrix, len);
    let skew = &m - m.adjoint();
    // i·(M - M†) is Hermitian with the same spectral norm.
    linalg::hermitian_spectral_norm(&(skew * Complex64::new(0.0, 1.0)))
}

/// `‖M M† - I‖₂` on the guard block.
pub fn defect_coisometry(t: &TruncatedOperator) -> f64 {
    let len = t.block_len();
    let prod = &t.matrix * t.matrix.adjoint();
    linalg::hermitian_spectral_norm(&(block(&prod, len) - CMatrix::identity(len, len)))
}

/// `‖M† M - I‖₂` on the guard block.
pub fn defect_isometry(t: &TruncatedOperator) -> f64 {
    let len = t.block_len();
    let prod = t.matrix.adjoint() * &t.matrix;
    linalg::hermitian_spectral_norm(&(block(&prod, len) - CMatrix::identity(len, len)))
}

/// `‖M₁† - M₂‖₂` on the block below the larger of the two guards.
pub fn defect_adjoint_pair(t1: &TruncatedOperator, t2: &TruncatedOperator) -> Result<f64> {
    if t1.basis != t2.basis {
        return Err(Error::DimensionMismatch { expected: t1.basis.len(), found: t2.basis.len() });
    }
    let len = t1.block_len_for(t1.guard.max(t2.guard));
    let diff = block(&t1.matrix.adjoint(), len) - block(&t2.matrix, len);
    Ok(linalg::spectral_norm(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::compute_moments;
    use crate::multiindex::factorial;
    use crate::weights::WeightFunction;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn classical(n: usize) -> KernelEvaluator {
        let m = compute_moments(&WeightFunction::linear(1.0).unwrap(), 64, 1e-12).unwrap();
        KernelEvaluator::with_defaults(m, n).unwrap()
    }

    fn scalar_map(c: Complex64, d: Complex64) -> AffineMap {
        AffineMap::new(CMatrix::from_element(1, 1, c), CVector::from_element(1, d)).unwrap()
    }

    #[test]
    fn apply_examples() {
        let cc = c(0.5, 0.5);
        let f = Polynomial::monomial(MultiIndex::from([3]), ONE);
        let Image::Polynomial(p) = apply(&WeightSymbol::one(), &scalar_map(cc, ZERO), &f, 10).unwrap() else {
            panic!()
        };
        assert_eq!(p, Polynomial::monomial(MultiIndex::from([3]), cc * cc * cc));

        let d = c(2.0, -1.0);
        let f = Polynomial::monomial(MultiIndex::from([2]), ONE);
        let Image::Polynomial(p) = apply(&WeightSymbol::one(), &scalar_map(ONE, d), &f, 10).unwrap() else {
            panic!()
        };
        assert_eq!(p.coefficient(&MultiIndex::from([1])), d * 2.0);
        assert_eq!(p.coefficient(&MultiIndex::from([0])), d * d);

        let u = WeightSymbol::Polynomial(Polynomial::variable(2, 0));
        let Image::Polynomial(p) = apply(&u, &AffineMap::identity(2), &Polynomial::variable(2, 1), 10).unwrap() else {
            panic!()
        };
        assert_eq!(p, Polynomial::monomial(MultiIndex::from([1, 1]), ONE));

        let f = Polynomial::monomial(MultiIndex::from([4]), ONE);
        assert!(matches!(
            apply(&WeightSymbol::one(), &scalar_map(ONE, ONE), &f, 3),
            Err(Error::DegreeOverflow { degree: 4, max: 3 })
        ));
    }

    #[test]
    fn kernel_multiple_image_is_kept_unexpanded() {
        let ev = classical(1);
        let q = CVector::from_element(1, c(0.3, 0.0));
        let u = WeightSymbol::KernelMultiple { alpha: c(2.0, 0.0), center: q.clone() };
        let f = Polynomial::variable(1, 0);
        let img = apply(&u, &scalar_map(c(0.5, 0.0), ZERO), &f, 4).unwrap();
        let z = CVector::from_element(1, c(0.7, -0.2));
        let expected = c(2.0, 0.0) * ev.kernel_eval(&q, &z).unwrap().value * z[0] * 0.5;
        assert!((img.eval(&z, &ev).unwrap() - expected).norm() < 1e-14);
    }

    #[test]
    fn adjoint_on_kernel_examples() {
        let ev = classical(2);
        let g = AffineMap::new(
            CMatrix::from_row_slice(2, 2, &[c(0.1, 0.0), c(0.2, 0.0), c(0.0, 0.3), ONE]),
            CVector::from_vec(vec![c(1.0, 2.0), c(-1.0, 0.0)]),
        )
        .unwrap();
        let zero = CVector::zeros(2);
        let (s, p) = adjoint_on_kernel(&WeightSymbol::one(), &AffineMap::linear(g.linear_part().clone()).unwrap(), &zero, &ev).unwrap();
        assert_eq!((s, p), (ONE, zero.clone()));
        let (s, p) = adjoint_on_kernel(&WeightSymbol::Constant(c(0.0, 2.0)), &g, &zero, &ev).unwrap();
        assert_eq!(s, c(0.0, -2.0));
        assert_eq!(&p, g.shift());
        let q = CVector::from_vec(vec![c(0.3, 0.1), c(0.0, -0.4)]);
        let alpha = c(0.5, 1.5);
        let u = WeightSymbol::KernelMultiple { alpha, center: q.clone() };
        let (s, _) = adjoint_on_kernel(&u, &g, &q, &ev).unwrap();
        let expected = (alpha * ev.kernel_norm_sq(&q).unwrap()).conj();
        assert!((s - expected).norm() < 1e-14);
    }

    #[test]
    fn diagonal_dilation_matrix() {
        let ev = classical(1);
        let cc = c(0.6, -0.3);
        let t = truncated_matrix(&WeightSymbol::one(), &scalar_map(cc, ZERO), &ev, 5).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i == j { cc.powu(i as u32) } else { ZERO };
                assert!((t.matrix()[(i, j)] - expected).norm() < 1e-15);
            }
        }
        assert_eq!(t.guard(), 0);
    }

    #[test]
    fn translation_matrix_matches_binomial_expansion() {
        let ev = classical(1);
        let d = c(0.4, 0.9);
        let n_max = 6;
        let t = truncated_matrix(&WeightSymbol::one(), &scalar_map(ONE, d), &ev, n_max).unwrap();
        for k in 0..=n_max {
            for m in 0..=n_max {
                let expected = if k <= m {
                    let binom = factorial(m) / (factorial(k) * factorial(m - k));
                    d.powu((m - k) as u32) * binom * libm::sqrt(factorial(k) / factorial(m))
                } else {
                    ZERO
                };
                assert!((t.matrix()[(k, m)] - expected).norm() < 1e-12 * expected.norm().max(1.0), "{k} {m} {} {expected}", t.matrix()[(k, m)]);
            }
        }
        assert_eq!(t.guard(), n_max / 2);
    }

    #[test]
    fn zero_multiplier() {
        let ev = classical(2);
        let t = truncated_matrix(&WeightSymbol::Zero, &AffineMap::identity(2), &ev, 4).unwrap();
        assert!(t.matrix().iter().all(|v| *v == ZERO));
        assert_eq!(defect_self_adjoint(&t), 0.0);
        assert!((defect_coisometry(&t) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_by_i_is_not_self_adjoint() {
        let ev = classical(1);
        let t = truncated_matrix(&WeightSymbol::one(), &scalar_map(c(0.0, 1.0), ZERO), &ev, 6).unwrap();
        // Diagonal i^m - (-i)^m reaches modulus 2.
        assert!((defect_self_adjoint(&t) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn half_dilation_coisometry_defect() {
        let ev = classical(2);
        let half = CMatrix::identity(2, 2) * c(0.5, 0.0);
        let t = truncated_matrix(&WeightSymbol::one(), &AffineMap::linear(half).unwrap(), &ev, 6).unwrap();
        // Degree-k block is (4^{-k} - 1)·I.
        assert!(defect_coisometry(&t) >= 0.5);
        assert!((defect_coisometry(&t) - (1.0 - libm::pow(0.25, 6.0))).abs() < 1e-12);
    }

    #[test]
    fn block_structure_for_linear_maps() {
        let ev = classical(2);
        let g = AffineMap::linear(CMatrix::from_row_slice(2, 2, &[c(0.3, 0.1), c(-0.2, 0.0), c(0.5, 0.5), c(0.1, -0.4)])).unwrap();
        let u = WeightSymbol::Polynomial(
            Polynomial::from_terms(2, [(MultiIndex::from([0, 0]), ONE), (MultiIndex::from([1, 1]), c(0.2, 0.3))]).unwrap(),
        );
        let t = truncated_matrix(&u, &g, &ev, 6).unwrap();
        assert_eq!(t.guard(), 2);
        for (i, b) in t.index().iter().enumerate() {
            for (j, a) in t.index().iter().enumerate() {
                let inside = a.degree() <= b.degree() && b.degree() <= a.degree() + 2;
                if !inside {
                    assert_eq!(t.matrix()[(i, j)], ZERO, "{b:?} <- {a:?}");
                }
            }
        }
    }
}
