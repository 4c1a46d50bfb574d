//! Sparse polynomials on `ℂⁿ` with complex coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::linalg::CVector;
use crate::multiindex::MultiIndex;
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::monomial(MultiIndex::zero(n), c)
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    /// The coordinate function `z_j`.
    pub fn variable(n: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, j), Complex64::new(1.0, 0.0))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (a, c) in terms {
            if a.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
            }
            p.add_term(a, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Complex64) {
        debug_assert_eq!(alpha.dim(), self.n);
        let v = self.coefficient(&alpha) + c;
        if v == Complex64::default() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, v);
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.add(b), x * y);
            }
        }
        out
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        Self { n: self.n, terms: self.terms.iter().filter(|(a, _)| a.degree() <= max_degree).map(|(a, c)| (a.clone(), *c)).collect() }
    }

    pub fn eval(&self, z: &CVector) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: z.len() });
        }
        Ok(self.terms.iter().map(|(a, c)| c * monomial_value(a, z)).sum())
    }

    /// `p ∘ (linear maps)`: substitutes `z_j ↦ images[j]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Self> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: images.len() });
        }
        let m = images.first().map_or(self.n, Polynomial::n);
        let max_deg = self.degree();
        // powers[j][k] = images[j]^k
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|g| {
                let mut v = Vec::with_capacity(max_deg + 1);
                v.push(Self::constant(m, Complex64::new(1.0, 0.0)));
                for k in 1..=max_deg {
                    let next = v[k - 1].mul(g);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(m);
        for (a, c) in &self.terms {
            let mut term = Self::constant(m, *c);
            for (j, &e) in a.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[j][e as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Maximum coefficient difference against `other`.
    pub fn max_coefficient_distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (a, c) in &self.terms {
            d = d.max((c - other.coefficient(a)).norm());
        }
        for (a, c) in &other.terms {
            if !self.terms.contains_key(a) {
                d = d.max(c.norm());
            }
        }
        d
    }
}

/// `z^α`.
pub fn monomial_value(alpha: &MultiIndex, z: &CVector) -> Complex64 {
    alpha
        .exponents()
        .iter()
        .zip(z.iter())
        .map(|(&e, v)| v.powu(e))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn binomial_substitution() {
        // z² ∘ (z + d) = z² + 2dz + d²
        let d = c(0.5, -1.0);
        let p = Polynomial::monomial(MultiIndex::from([2]), c(1.0, 0.0));
        let shift = Polynomial::variable(1, 0).add(&Polynomial::constant(1, d));
        let q = p.substitute(&[shift]).unwrap();
        assert_eq!(q.coefficient(&MultiIndex::from([2])), c(1.0, 0.0));
        assert_eq!(q.coefficient(&MultiIndex::from([1])), d * 2.0);
        assert_eq!(q.coefficient(&MultiIndex::from([0])), d * d);
        assert_eq!(q.degree(), 2);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = Polynomial::variable(2, 0);
        let diff = x.add(&x.scale(c(-1.0, 0.0)));
        assert!(diff.is_zero());
        assert_eq!(diff.degree(), 0);
    }

    #[test]
    fn evaluation() {
        let p = Polynomial::from_terms(
            2,
            [(MultiIndex::from([1, 1]), c(2.0, 0.0)), (MultiIndex::from([0, 0]), c(0.0, 1.0))],
        )
        .unwrap();
        let z = CVector::from_vec(alloc::vec![c(1.0, 1.0), c(2.0, 0.0)]);
        assert_eq!(p.eval(&z).unwrap(), c(4.0, 5.0));
        assert!(p.eval(&CVector::from_vec(alloc::vec![c(1.0, 0.0)])).is_err());
        assert!(Polynomial::from_terms(2, [(MultiIndex::from([1]), c(1.0, 0.0))]).is_err());
    }
}
