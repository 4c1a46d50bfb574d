//! The generating function `G(t) = Σ t^r / c_r` and the reproducing kernel
//!
//! ```text
//! K_p(z) = G^{(n-1)}(⟨z,p⟩) / (n-1)!
//! ```
//!
//! Series are summed until a certified tail bound drops below
//! `tail_tol·(1 + |partial sum|)`. The bound uses that the term ratio
//! `(r+1)/(r+1-k) · |t| · c_r/c_{r+1}` is nonincreasing in `r`, which follows
//! from log-convexity of the moments: once it falls below one the remaining
//! terms are dominated by a geometric series.

use alloc::vec::Vec;

use crate::linalg::{inner, CVector};
use crate::moments::{monomial_norm_sq, MomentTable};
use crate::multiindex::{factorial, MonomialBasis, MultiIndex};
use crate::polynomial::monomial_value;
use crate::{Complex64, Error, Result};

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 48;

/// A truncated series value with its accepted tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Evaluates `G`, its derivatives and `K_p` on `ℂⁿ`. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEvaluator {
    moments: MomentTable,
    n: usize,
    tail_tol: f64,
    max_terms: usize,
}

impl KernelEvaluator {
    pub fn new(moments: MomentTable, n: usize, tail_tol: f64, max_terms: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension n must be at least 1".into()));
        }
        if !(tail_tol > 0.0) || max_terms == 0 {
            return Err(Error::InvalidArgument("tail_tol and max_terms must be positive".into()));
        }
        if max_terms + n - 1 > moments.r_max() {
            return Err(Error::IndexOutOfRange { needed: max_terms + n - 1, available: moments.r_max() });
        }
        Ok(Self { moments, n, tail_tol, max_terms })
    }

    /// `tail_tol = 1e-12`, `max_terms = 48`.
    pub fn with_defaults(moments: MomentTable, n: usize) -> Result<Self> {
        Self::new(moments, n, DEFAULT_TAIL_TOL, DEFAULT_MAX_TERMS)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn moments(&self) -> &MomentTable {
        &self.moments
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// The same evaluator in another dimension.
    pub fn with_dimension(&self, n: usize) -> Result<Self> {
        Self::new(self.moments.clone(), n, self.tail_tol, self.max_terms)
    }

    /// `c_{n-1}`, the reciprocal of `K_0`.
    pub fn c_n_minus_1(&self) -> f64 {
        self.moments.values()[self.n - 1]
    }

    /// `G^{(k)}(t) = Σ_{r≥k} r(r-1)…(r-k+1) t^{r-k} / c_r`.
    pub fn g_eval(&self, t: Complex64, k: usize) -> Result<KernelValue> {
        let abs_t = t.norm();
        let mut sum = Complex64::default();
        let mut power = Complex64::new(1.0, 0.0);
        let mut last_bound = f64::INFINITY;
        for m in 0..self.max_terms {
            let r = m + k;
            let c_r = self.moments.get(r)?;
            let c_next = self.moments.get(r + 1)?;
            let coef = falling(r, k) / c_r;
            let term = power * coef;
            sum += term;
            let bound = if abs_t == 0.0 {
                0.0
            } else {
                let ratio = (r + 1) as f64 / (r + 1 - k) as f64 * abs_t * c_r / c_next;
                if ratio < 1.0 {
                    term.norm() * ratio / (1.0 - ratio)
                } else {
                    f64::INFINITY
                }
            };
            last_bound = bound;
            if bound <= self.tail_tol * (1.0 + sum.norm()) {
                return Ok(KernelValue { value: sum, tail_bound: bound, terms: m + 1 });
            }
            power *= t;
        }
        Err(Error::TruncationBudgetExceeded { max_terms: self.max_terms, tail_bound: last_bound })
    }

    /// `K_p(z)`.
    pub fn kernel_eval(&self, p: &CVector, z: &CVector) -> Result<KernelValue> {
        self.check_dim(p)?;
        self.check_dim(z)?;
        let scale = factorial(self.n - 1);
        let v = self.g_eval(inner(z, p), self.n - 1)?;
        Ok(KernelValue { value: v.value / scale, tail_bound: v.tail_bound / scale, terms: v.terms })
    }

    /// `‖K_p‖² = K_p(p)`.
    pub fn kernel_norm_sq(&self, p: &CVector) -> Result<f64> {
        let v = self.kernel_eval(p, p)?;
        debug_assert!(v.value.im.abs() <= 1e-12 * v.value.re.abs().max(1.0));
        Ok(v.value.re)
    }

    pub fn kernel_norm(&self, p: &CVector) -> Result<f64> {
        Ok(libm::sqrt(self.kernel_norm_sq(p)?))
    }

    /// `‖z^α‖²` in this dimension.
    pub fn monomial_norm_sq(&self, alpha: &MultiIndex) -> Result<f64> {
        monomial_norm_sq(&self.moments, alpha, self.n)
    }

    /// Coefficients of `K_q` on the monomials of `basis`: `conj(q)^γ / ‖z^γ‖²`.
    pub fn kernel_coefficients(&self, q: &CVector, basis: &MonomialBasis) -> Result<Vec<Complex64>> {
        self.check_dim(q)?;
        let q_conj = q.map(|v| v.conj());
        basis
            .indices()
            .iter()
            .map(|g| Ok(monomial_value(g, &q_conj) / self.monomial_norm_sq(g)?))
            .collect()
    }

    fn check_dim(&self, v: &CVector) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
        }
        Ok(())
    }
}

fn falling(r: usize, k: usize) -> f64 {
    ((r + 1 - k)..=r).map(|j| j as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::compute_moments;
    use crate::weights::WeightFunction;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn classical(n: usize) -> KernelEvaluator {
        let m = compute_moments(&WeightFunction::linear(1.0).unwrap(), 64, 1e-12).unwrap();
        KernelEvaluator::with_defaults(m, n).unwrap()
    }

    #[test]
    fn classical_generating_function_is_exp() {
        let ev = classical(1);
        let v = ev.g_eval(c(1.0, 0.0), 0).unwrap();
        assert!((v.value - c(core::f64::consts::E, 0.0)).norm() < 1e-12);
        // G' = G for the exponential.
        let t = c(0.3, -1.2);
        let g = ev.g_eval(t, 0).unwrap().value;
        let g1 = ev.g_eval(t, 1).unwrap().value;
        let g2 = ev.g_eval(t, 2).unwrap().value;
        assert!((g - g1).norm() < 1e-12 && (g - g2).norm() < 1e-12);
        let expected = c(libm::exp(0.3) * libm::cos(-1.2), libm::exp(0.3) * libm::sin(-1.2));
        assert!((g - expected).norm() < 1e-11, "{g} {expected} {}", (g-expected).norm());
    }

    #[test]
    fn g_at_zero_is_reciprocal_of_c_k() {
        let ev = classical(1);
        for k in 0..4 {
            let v = ev.g_eval(c(0.0, 0.0), k).unwrap();
            // k!/c_k
            let expected = factorial(k) / ev.moments().values()[k];
            assert_eq!(v.value, c(expected, 0.0));
            assert_eq!(v.terms, 1);
        }
    }

    #[test]
    fn kernel_at_origin_is_constant() {
        for n in 1..=3 {
            let ev = classical(n);
            let zero = CVector::zeros(n);
            let z = CVector::from_fn(n, |i, _| c(0.3 * i as f64, -0.7));
            let v = ev.kernel_eval(&zero, &z).unwrap();
            assert!((v.value - c(1.0 / ev.c_n_minus_1(), 0.0)).norm() < 1e-15);
            assert!((ev.kernel_norm_sq(&zero).unwrap() - 1.0 / ev.c_n_minus_1()).abs() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_points_in_two_dimensions() {
        // ⟨(i,1),(1,i)⟩ = i - i = 0, so K = G'(0)/1! = 1/c_1 = 1.
        let ev = classical(2);
        let p = CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let z = CVector::from_vec(alloc::vec![c(0.0, 1.0), c(1.0, 0.0)]);
        let v = ev.kernel_eval(&p, &z).unwrap();
        assert!((v.value - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn classical_norm_is_exponential() {
        let ev = classical(1);
        let p = CVector::from_vec(alloc::vec![c(1.0, 0.0)]);
        assert!((ev.kernel_norm_sq(&p).unwrap() - core::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn budget_and_range_errors() {
        let m = compute_moments(&WeightFunction::linear(1.0).unwrap(), 20, 1e-12).unwrap();
        assert!(matches!(KernelEvaluator::with_defaults(m.clone(), 1), Err(Error::IndexOutOfRange { .. })));
        let ev = KernelEvaluator::new(m, 1, 1e-12, 10).unwrap();
        assert!(matches!(ev.g_eval(c(30.0, 0.0), 0), Err(Error::TruncationBudgetExceeded { max_terms: 10, .. })));
        let q = CVector::zeros(2);
        assert!(matches!(ev.kernel_eval(&q, &q), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kernel_coefficients_resum_to_kernel() {
        let ev = classical(2);
        let basis = MonomialBasis::new(2, 30);
        let q = CVector::from_vec(alloc::vec![c(0.3, 0.1), c(-0.2, 0.4)]);
        let z = CVector::from_vec(alloc::vec![c(0.5, -0.5), c(0.1, 0.2)]);
        let coeffs = ev.kernel_coefficients(&q, &basis).unwrap();
        let s: Complex64 = basis.indices().iter().zip(&coeffs).map(|(g, a)| a * monomial_value(g, &z)).sum();
        let direct = ev.kernel_eval(&q, &z).unwrap().value;
        assert!((s - direct).norm() < 1e-13);
    }
}
