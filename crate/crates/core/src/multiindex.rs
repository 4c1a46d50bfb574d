//! Multi-indices and the graded lexicographic monomial basis.
//!
//! Monomials `z^α` are ordered first by total degree `|α|`, then
//! lexicographically with larger exponents on earlier variables first:
//! for `n = 2` the order is `1, z₁, z₂, z₁², z₁z₂, z₂², …`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Exponent vector `α = (α₁, …, αₙ)` of a monomial `z^α`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The unit index `e_j`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `α!` as a floating-point number.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        Self(v.to_vec())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `k!` in floating point (exact for `k ≤ 22`, overflows past 170).
pub fn factorial(k: usize) -> f64 {
    (2..=k).map(|j| j as f64).product()
}

/// Binomial coefficient as an integer; callers keep arguments small.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All monomials in `n` variables of total degree at most `max_degree`, in
/// graded lexicographic order, with constant-time rank lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    n: usize,
    max_degree: usize,
    indices: Vec<MultiIndex>,
    // binom_table[a][b] = C(a, b) for a ≤ max_degree + n.
    binom_table: Vec<Vec<usize>>,
}

impl MonomialBasis {
    pub fn new(n: usize, max_degree: usize) -> Self {
        assert!(n >= 1, "need at least one variable");
        let top = max_degree + n;
        let binom_table = (0..=top).map(|a| (0..=top).map(|b| binomial(a, b)).collect()).collect();
        let mut indices = Vec::with_capacity(binomial(max_degree + n, n));
        let mut current = vec![0u32; n];
        for d in 0..=max_degree {
            push_degree(&mut indices, &mut current, 0, d as u32);
        }
        Self { n, max_degree, indices, binom_table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, rank: usize) -> &MultiIndex {
        &self.indices[rank]
    }

    /// Number of monomials of total degree `< d`.
    pub fn count_below_degree(&self, d: usize) -> usize {
        if d == 0 {
            0
        } else {
            self.binom_table[d - 1 + self.n][self.n]
        }
    }

    /// Position of `exponents` in the basis, or `None` when the degree is too
    /// large or the dimension differs.
    pub fn rank(&self, exponents: &[u32]) -> Option<usize> {
        if exponents.len() != self.n {
            return None;
        }
        let d: usize = exponents.iter().map(|&a| a as usize).sum();
        if d > self.max_degree {
            return None;
        }
        let mut pos = self.count_below_degree(d);
        let mut remaining = d;
        for (i, &a) in exponents.iter().enumerate().take(self.n - 1) {
            let a = a as usize;
            let vars_after = self.n - i - 1;
            // Indices agreeing so far but with a larger entry at position i come first.
            for v in (a + 1)..=remaining {
                pos += self.compositions(remaining - v, vars_after);
            }
            remaining -= a;
        }
        Some(pos)
    }

    // Number of ways to write `total` as an ordered sum of `parts` nonnegative integers.
    fn compositions(&self, total: usize, parts: usize) -> usize {
        if parts == 0 {
            usize::from(total == 0)
        } else {
            self.binom_table[total + parts - 1][parts - 1]
        }
    }
}

fn push_degree(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    let n = current.len();
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v;
        push_degree(out, current, pos + 1, remaining - v);
    }
    current[pos] = 0;
}
