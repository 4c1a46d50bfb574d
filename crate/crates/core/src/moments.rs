//! Stieltjes moments `c_r = ∫₀^∞ s^r e^{-ψ(s)} ds` and monomial norms.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::multiindex::{factorial, MultiIndex};
use crate::quadrature::{integrate, integrate_breaks, Integral};
use crate::weights::WeightFunction;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_R_MAX: usize = 64;
/// Function evaluations allowed per moment.
pub const EVALUATION_CAP: usize = 1_000_000;
/// The head/tail split point `s*` is placed where the integrand has dropped
/// by this factor (in log space) below its peak.
const TAIL_LOG_DROP: f64 = 40.0;
const SPLIT_SEARCH_LIMIT: f64 = 1e8;

/// The moments `c_0 … c_{R_max}` of one weight, with absolute error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    weight_name: String,
    c: Vec<f64>,
    err: Vec<f64>,
    tol: f64,
}

impl MomentTable {
    /// Builds a table from externally supplied values, enforcing positivity
    /// and (to relative `1e-9`) log-convexity.
    pub fn from_values(weight_name: impl Into<String>, c: Vec<f64>, err: Vec<f64>, tol: f64) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidMoments("table is empty".into()));
        }
        if c.len() != err.len() {
            return Err(Error::InvalidMoments("value and error columns differ in length".into()));
        }
        if let Some(r) = c.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidMoments(alloc::format!("c_{r} is not a positive number")));
        }
        if let Some(r) = (1..c.len().saturating_sub(1)).find(|&r| c[r] * c[r] > c[r - 1] * c[r + 1] * (1.0 + 1e-9)) {
            return Err(Error::InvalidMoments(alloc::format!("log-convexity fails at r = {r}")));
        }
        Ok(Self { weight_name: weight_name.into(), c, err, tol })
    }

    pub fn weight_name(&self) -> &str {
        &self.weight_name
    }

    pub fn r_max(&self) -> usize {
        self.c.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    pub fn errors(&self) -> &[f64] {
        &self.err
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn get(&self, r: usize) -> Result<f64> {
        self.c.get(r).copied().ok_or(Error::IndexOutOfRange { needed: r, available: self.r_max() })
    }

    /// A copy truncated to `c_0 … c_{r_max}`.
    pub fn truncated(&self, r_max: usize) -> Result<Self> {
        if r_max > self.r_max() {
            return Err(Error::IndexOutOfRange { needed: r_max, available: self.r_max() });
        }
        Ok(Self {
            weight_name: self.weight_name.clone(),
            c: self.c[..=r_max].to_vec(),
            err: self.err[..=r_max].to_vec(),
            tol: self.tol,
        })
    }
}

/// Computes `c_0 … c_{r_max}` for the weight `w`.
///
/// Each integral is split at a point `s*` past the peak of `s^r e^{-ψ(s)}`
/// where the integrand has fallen below `e^{-40}` of its peak and is
/// decreasing. The head `[0, s*]` is integrated with adaptive Gauss–Kronrod
/// panels, the tail after the substitution `u = e^{-(s - s*)}`. Convexity of
/// `ψ` bounds the tail by `f(s*) / (ψ'(s*) - r/s*)`.
pub fn compute_moments(w: &WeightFunction, r_max: usize, tol: f64) -> Result<MomentTable> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("moment tolerance must be positive".into()));
    }
    let mut c = Vec::with_capacity(r_max + 1);
    let mut err = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        let m = moment(w, r, tol)?;
        if !(m.value > 0.0 && m.value.is_finite()) {
            return Err(Error::InvalidMoments(alloc::format!("c_{r} = {} is not positive and finite", m.value)));
        }
        c.push(m.value);
        err.push(m.error);
    }
    Ok(MomentTable { weight_name: w.name().to_string(), c, err, tol })
}

fn log_integrand(w: &WeightFunction, r: usize, s: f64) -> f64 {
    if r == 0 {
        -w.psi(s)
    } else if s <= 0.0 {
        f64::NEG_INFINITY
    } else {
        r as f64 * libm::log(s) - w.psi(s)
    }
}

// Log-derivative of the integrand: r/s - ψ'(s), nonincreasing for convex ψ.
fn log_slope(w: &WeightFunction, r: usize, s: f64) -> f64 {
    r as f64 / s - w.d1(s)
}

fn peak(w: &WeightFunction, r: usize) -> Result<f64> {
    if r == 0 && w.d1(0.0) > 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while log_slope(w, r, hi) > 0.0 {
        hi *= 2.0;
        if hi > SPLIT_SEARCH_LIMIT {
            return Err(Error::TailNotConvergent { r });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mid > 0.0 && log_slope(w, r, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn moment(w: &WeightFunction, r: usize, tol: f64) -> Result<Integral> {
    let s_peak = peak(w, r)?;
    let log_peak = log_integrand(w, r, s_peak);
    if !log_peak.is_finite() {
        return Err(Error::NonFiniteValue { what: "moment integrand", y: s_peak });
    }
    // Scale by the peak so the panels never see under- or overflow.
    let f = |s: f64| libm::exp(log_integrand(w, r, s) - log_peak);

    let mut step = 1.0_f64.max(0.25 * s_peak);
    let mut split = s_peak + step;
    loop {
        let slope = -log_slope(w, r, split);
        if slope > 0.0 && log_integrand(w, r, split) - log_peak <= -TAIL_LOG_DROP {
            break;
        }
        step *= 1.5;
        split = s_peak + step;
        if split > SPLIT_SEARCH_LIMIT || !split.is_finite() {
            return Err(Error::TailNotConvergent { r });
        }
    }

    let scale = libm::exp(log_peak);
    // Tolerances are relative to the scaled integrand; the absolute target is
    // tol·max(1, c_r), split evenly between head and tail.
    let abs_tol = 0.5 * tol / scale;
    let rel_tol = 0.5 * tol;

    let mut breaks = Vec::new();
    const PANELS: usize = 16;
    for i in 0..=PANELS {
        breaks.push(split * i as f64 / PANELS as f64);
    }
    if s_peak > 0.0 && !breaks.contains(&s_peak) {
        breaks.push(s_peak);
        breaks.sort_by(f64::total_cmp);
    }
    let head = integrate_breaks(f, &breaks, abs_tol, rel_tol, EVALUATION_CAP)
        .map_err(|e| Error::QuadratureBudgetExceeded { evaluations: e.partial.evaluations })?;

    let tail_bound = libm::exp(log_integrand(w, r, split) - log_peak) / (-log_slope(w, r, split));
    let log_split = log_integrand(w, r, split) - log_peak;
    let g = |u: f64| {
        let s = split - libm::log(u);
        // f(s)/u with u = e^{-(s - s*)}
        libm::exp(log_integrand(w, r, s) - log_peak + (s - split))
    };
    let budget = EVALUATION_CAP.saturating_sub(head.evaluations);
    let tail_abs_tol = abs_tol.max(0.5 * rel_tol * head.value.abs());
    let tail = if log_split < -700.0 {
        Integral { value: 0.0, error: tail_bound, evaluations: 0 }
    } else {
        integrate(g, 0.0, 1.0, tail_abs_tol, 0.0, budget.max(30))
            .map_err(|e| Error::QuadratureBudgetExceeded { evaluations: head.evaluations + e.partial.evaluations })?
    };
    let tail_error = tail.error.min(tail_bound);
    if !(tail_bound.is_finite()) {
        return Err(Error::TailNotConvergent { r });
    }

    let value = (head.value + tail.value) * scale;
    let error = (head.error + tail_error) * scale;
    if error > tol * value.abs().max(1.0) * (1.0 + 1e-9) {
        return Err(Error::QuadratureBudgetExceeded { evaluations: head.evaluations + tail.evaluations });
    }
    Ok(Integral { value, error, evaluations: head.evaluations + tail.evaluations })
}

/// Squared norm of the monomial `z^α` in `F²_ψ(ℂⁿ)`:
///
/// ```text
/// ‖z^α‖² = (n-1)! · α! · c_{|α|+n-1} / (|α|+n-1)!
/// ```
///
/// The measure carries the factor `(n-1)!/πⁿ`, so that `‖1‖² = c_{n-1}` and
/// `K_0 ≡ 1/c_{n-1}` reproduce `f(0)`.
pub fn monomial_norm_sq(m: &MomentTable, alpha: &MultiIndex, n: usize) -> Result<f64> {
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: alpha.dim() });
    }
    let k = alpha.degree() + n - 1;
    let ck = m.get(k)?;
    // (n-1)!·α!/k! as a product of ratios to stay finite for large k.
    let mut ratio = alpha.factorial() / factorial(k);
    if !ratio.is_finite() || ratio == 0.0 {
        ratio = libm::exp(
            log_factorial(n - 1) + alpha.exponents().iter().map(|&a| log_factorial(a as usize)).sum::<f64>()
                - log_factorial(k),
        );
        return Ok(ratio * ck);
    }
    Ok(factorial(n - 1) * ratio * ck)
}

fn log_factorial(k: usize) -> f64 {
    (2..=k).map(|j| libm::log(j as f64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_table(rmax: usize) -> MomentTable {
        compute_moments(&WeightFunction::linear(1.0).unwrap(), rmax, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn linear_weight_gives_factorials() {
        let t = gamma_table(30);
        for r in 0..=30 {
            let exact = factorial(r);
            assert!((t.values()[r] - exact).abs() <= 1e-10 * exact, "r={r}: {} vs {exact}", t.values()[r]);
            assert!(t.errors()[r] <= DEFAULT_TOL * exact.max(1.0));
        }
    }

    #[test]
    fn scaled_linear_weight() {
        // ∫ s^r e^{-2s} ds = r!/2^{r+1}
        let t = compute_moments(&WeightFunction::linear(2.0).unwrap(), 12, DEFAULT_TOL).unwrap();
        for r in 0..=12 {
            let exact = factorial(r) / libm::pow(2.0, r as f64 + 1.0);
            assert!((t.values()[r] - exact).abs() <= 1e-11 * exact);
        }
    }

    #[test]
    fn default_table_is_positive_and_log_convex() {
        for w in [WeightFunction::linear(1.0).unwrap(), WeightFunction::linear_quadratic()] {
            let t = compute_moments(&w, DEFAULT_R_MAX, DEFAULT_TOL).unwrap();
            let c = t.values();
            assert!(c.iter().all(|&v| v > 0.0));
            for r in 1..c.len() - 1 {
                assert!(c[r] * c[r] <= c[r - 1] * c[r + 1] * (1.0 + 1e-12), "{} r={r}", w.name());
                assert!(c[r + 1] / c[r] >= c[r] / c[r - 1] * (1.0 - 1e-12));
            }
            for (r, e) in t.errors().iter().enumerate() {
                assert!(*e <= DEFAULT_TOL * c[r].max(1.0), "r={r} err={e}");
            }
        }
    }

    #[test]
    fn non_decaying_weight_has_no_convergent_tail() {
        // e^{-2 ln(1+s)} = (1+s)^{-2}: only polynomial decay, and s²/(1+s)² is
        // not integrable at all.
        let w = WeightFunction::from_fn("log", |s: f64| 2.0 * libm::log(1.0 + s));
        assert!(matches!(compute_moments(&w, 3, DEFAULT_TOL), Err(Error::TailNotConvergent { .. })));
        let neg = WeightFunction::polynomial("neg", alloc::vec![0.0, -1.0]).unwrap();
        assert!(matches!(compute_moments(&neg, 0, DEFAULT_TOL), Err(Error::TailNotConvergent { .. })));
    }

    #[test]
    fn monomial_norms() {
        let t = gamma_table(12);
        // n = 1: ‖z^m‖² = m!
        for m in 0..=10u32 {
            let v = monomial_norm_sq(&t, &MultiIndex::from([m]), 1).unwrap();
            assert!((v - factorial(m as usize)).abs() <= 1e-10 * v);
        }
        // n = 2, α = 0: c_1
        let v = monomial_norm_sq(&t, &MultiIndex::from([0, 0]), 2).unwrap();
        assert!((v - t.values()[1]).abs() < 1e-15);
        // α = 0 for any n gives c_{n-1}.
        for n in 1..=4 {
            let v = monomial_norm_sq(&t, &MultiIndex::zero(n), n).unwrap();
            assert!((v - t.values()[n - 1]).abs() <= 1e-14 * v);
        }
        assert!(matches!(
            monomial_norm_sq(&t, &MultiIndex::from([12, 1]), 2),
            Err(Error::IndexOutOfRange { needed: 14, available: 12 })
        ));
        assert!(matches!(monomial_norm_sq(&t, &MultiIndex::from([1]), 2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn from_values_validates() {
        assert!(MomentTable::from_values("x", alloc::vec![1.0, 1.0, 2.0], alloc::vec![0.0; 3], 1e-12).is_ok());
        assert!(MomentTable::from_values("x", alloc::vec![1.0, -1.0], alloc::vec![0.0; 2], 1e-12).is_err());
        assert!(MomentTable::from_values("x", alloc::vec![1.0, 3.0, 2.0], alloc::vec![0.0; 3], 1e-12).is_err());
        assert!(MomentTable::from_values("x", alloc::vec![1.0], alloc::vec![], 1e-12).is_err());
    }
}
