//! Weight functions `ψ` and numerical admissibility checks.
//!
//! A weight is admissible when `ψ' > 0`, `ψ'' ≥ 0` and `ψ''' ≥ 0` on
//! `[0, ∞)`, and `φ(y) = y ψ'(y)` satisfies the growth bound
//! `φ''(y) = O(y^{-1/2} φ'(y)^{1+l})` as `y → ∞` for some `l < 1/2`.
//! The growth conditions are checked pointwise on a grid. The asymptotic
//! bound cannot be decided by sampling; we report the largest value of the
//! ratio over the upper half of the grid and compare it with a bound.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default sampling grid: 64 log-spaced points in `[1e-2, 1e3]`.
pub const DEFAULT_GRID_POINTS: usize = 64;
pub const DEFAULT_GRID_MIN: f64 = 1e-2;
pub const DEFAULT_GRID_MAX: f64 = 1e3;
pub const DEFAULT_SIGN_TOL: f64 = 1e-12;
/// Largest tail value of the smoothness ratio still reported as bounded.
pub const DEFAULT_RATIO_BOUND: f64 = 1e2;

enum Repr {
    /// `ψ(y) = Σ a_k y^k`, derivatives in closed form.
    Polynomial(Vec<f64>),
    Custom { psi: RealFn, derivatives: Option<[RealFn; 3]> },
}

/// A weight `ψ: [0, ∞) → [0, ∞)` together with its first three derivatives.
///
/// Immutable after construction.
pub struct WeightFunction {
    name: String,
    repr: Repr,
    y_max: f64,
}

impl core::fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let kind = match &self.repr {
            Repr::Polynomial(c) => return write!(f, "WeightFunction({}, poly {:?})", self.name, c),
            Repr::Custom { derivatives: Some(_), .. } => "closed-form",
            Repr::Custom { derivatives: None, .. } => "finite-difference",
        };
        write!(f, "WeightFunction({}, {kind})", self.name)
    }
}

impl WeightFunction {
    /// `ψ(y) = a·y` with `a > 0`; `a = 1` is the classical Fock weight.
    pub fn linear(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!("linear weight needs a > 0, got {a}")));
        }
        let name = if a == 1.0 { "linear".to_string() } else { alloc::format!("linear:{a}") };
        Self::polynomial(name, Vec::from([0.0, a]))
    }

    /// `ψ(y) = y + y²`.
    pub fn linear_quadratic() -> Self {
        Self::polynomial("linear-quadratic", Vec::from([0.0, 1.0, 1.0]))
            .expect("fixed coefficients are valid")
    }

    /// `ψ(y) = Σ coeffs[k]·y^k`.
    pub fn polynomial(name: impl Into<String>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("polynomial weight needs finite coefficients".into()));
        }
        Ok(Self { name: name.into(), repr: Repr::Polynomial(coeffs), y_max: DEFAULT_GRID_MAX })
    }

    /// Built-in weights by name: `linear`, `linear:A`, `linear-quadratic`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "linear" => Self::linear(1.0).ok(),
            "linear-quadratic" => Some(Self::linear_quadratic()),
            _ => {
                let a = name.strip_prefix("linear:")?.parse().ok()?;
                Self::linear(a).ok()
            }
        }
    }

    /// A weight with closed-form derivatives `[ψ', ψ'', ψ''']`.
    pub fn with_derivatives<P, D1, D2, D3>(name: impl Into<String>, psi: P, d: (D1, D2, D3)) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
        D3: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            repr: Repr::Custom {
                psi: Box::new(psi),
                derivatives: Some([Box::new(d.0), Box::new(d.1), Box::new(d.2)]),
            },
            y_max: DEFAULT_GRID_MAX,
        }
    }

    /// A weight whose derivatives are estimated by central differences.
    pub fn from_fn<P>(name: impl Into<String>, psi: P) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            repr: Repr::Custom { psi: Box::new(psi), derivatives: None },
            y_max: DEFAULT_GRID_MAX,
        }
    }

    pub fn with_y_max(mut self, y_max: f64) -> Self {
        self.y_max = y_max;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    /// Polynomial coefficients, when the weight is a polynomial.
    pub fn coefficients(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Polynomial(c) => Some(c),
            Repr::Custom { .. } => None,
        }
    }

    pub fn has_closed_form_derivatives(&self) -> bool {
        !matches!(self.repr, Repr::Custom { derivatives: None, .. })
    }

    pub fn psi(&self, y: f64) -> f64 {
        match &self.repr {
            Repr::Polynomial(c) => poly_derivative(c, 0, y),
            Repr::Custom { psi, .. } => psi(y),
        }
    }

    /// `ψ^{(order)}(y)` for `order ≤ 3`, closed form when available.
    pub fn derivative(&self, order: usize, y: f64) -> f64 {
        assert!(order <= 3, "only derivatives up to order 3 are tracked");
        if order == 0 {
            return self.psi(y);
        }
        match &self.repr {
            Repr::Polynomial(c) => poly_derivative(c, order, y),
            Repr::Custom { derivatives: Some(d), .. } => d[order - 1](y),
            Repr::Custom { derivatives: None, .. } => self.finite_difference(order, y),
        }
    }

    pub fn d1(&self, y: f64) -> f64 {
        self.derivative(1, y)
    }
    pub fn d2(&self, y: f64) -> f64 {
        self.derivative(2, y)
    }
    pub fn d3(&self, y: f64) -> f64 {
        self.derivative(3, y)
    }

    /// Central finite-difference estimate of `ψ^{(order)}(y)` from `ψ` alone.
    ///
    /// The first derivative uses `h = max(1e-5, 1e-5·y)`; the second and third
    /// use steps scaled by `10` and `100` respectively so that rounding in
    /// `ψ` stays below the truncation error.
    pub fn finite_difference(&self, order: usize, y: f64) -> f64 {
        let base = match order {
            1 => 1e-5,
            2 => 1e-4,
            _ => 1e-3,
        };
        let h = base * y.abs().max(1.0);
        let f = |x: f64| self.psi(x);
        match order {
            0 => f(y),
            1 => (f(y + h) - f(y - h)) / (2.0 * h),
            2 => (f(y + h) - 2.0 * f(y) + f(y - h)) / (h * h),
            3 => (f(y + 2.0 * h) - 2.0 * f(y + h) + 2.0 * f(y - h) - f(y - 2.0 * h)) / (2.0 * h * h * h),
            _ => panic!("only derivatives up to order 3 are tracked"),
        }
    }
}

fn poly_derivative(c: &[f64], order: usize, y: f64) -> f64 {
    // Horner on the differentiated coefficients.
    let mut acc = 0.0;
    for k in (order..c.len()).rev() {
        let falling: f64 = ((k - order + 1)..=k).map(|j| j as f64).product();
        acc = acc * y + c[k] * falling;
    }
    acc
}

/// Worst grid value of a sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub y: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityWitness {
    pub min_d1: Extremum,
    pub min_d2: Extremum,
    pub min_d3: Extremum,
    /// Largest smoothness ratio over the upper half of the grid.
    pub max_tail_ratio: Extremum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub weight: String,
    pub growth_ok: bool,
    /// Sampled proxy for the asymptotic smoothness bound, not a proof.
    pub smoothness_ok: bool,
    pub l_used: f64,
    pub tol: f64,
    pub ratio_bound: f64,
    pub witness: AdmissibilityWitness,
}

/// 64 log-spaced points in `[1e-2, 1e3]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(DEFAULT_GRID_MIN, DEFAULT_GRID_MAX, DEFAULT_GRID_POINTS)
}

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (libm::log(lo), libm::log(hi));
    let steps = points.saturating_sub(1).max(1) as f64;
    (0..points).map(|i| libm::exp(a + (b - a) * i as f64 / steps)).collect()
}

/// Checks the growth conditions pointwise and the smoothness bound by its
/// tail ratio, using [`DEFAULT_RATIO_BOUND`].
pub fn check_admissible(w: &WeightFunction, grid: &[f64], l: f64, tol: f64) -> Result<AdmissibilityReport> {
    check_admissible_with_bound(w, grid, l, tol, DEFAULT_RATIO_BOUND)
}

pub fn check_admissible_with_bound(
    w: &WeightFunction,
    grid: &[f64],
    l: f64,
    tol: f64,
    ratio_bound: f64,
) -> Result<AdmissibilityReport> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty"));
    }
    if grid.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing"));
    }
    if !(grid[0] > 0.0) || grid[grid.len() - 1] > w.y_max() {
        return Err(Error::InvalidGrid("grid must lie in (0, y_max]"));
    }
    if !(l < 0.5) {
        return Err(Error::InvalidExponent(l));
    }

    let start = Extremum { y: f64::NAN, value: f64::INFINITY };
    let (mut min_d1, mut min_d2, mut min_d3) = (start, start, start);
    let mut max_ratio = Extremum { y: f64::NAN, value: f64::NEG_INFINITY };
    let tail_from = grid.len() / 2;
    let mut smooth_defined = true;

    for (i, &y) in grid.iter().enumerate() {
        let psi = w.psi(y);
        let d1 = w.d1(y);
        let d2 = w.d2(y);
        let d3 = w.d3(y);
        for (what, v) in [("psi", psi), ("psi'", d1), ("psi''", d2), ("psi'''", d3)] {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { what, y });
            }
        }
        for (slot, v) in [(&mut min_d1, d1), (&mut min_d2, d2), (&mut min_d3, d3)] {
            if v < slot.value {
                *slot = Extremum { y, value: v };
            }
        }
        if i >= tail_from {
            // φ = yψ', φ' = ψ' + yψ'', φ'' = 2ψ'' + yψ'''.
            let phi1 = d1 + y * d2;
            let phi2 = 2.0 * d2 + y * d3;
            if phi1 > 0.0 {
                let denom = libm::pow(y, -0.5) * libm::pow(phi1, 1.0 + l);
                let ratio = (phi2 / denom).abs();
                if ratio > max_ratio.value || max_ratio.y.is_nan() {
                    max_ratio = Extremum { y, value: ratio };
                }
            } else {
                smooth_defined = false;
                max_ratio = Extremum { y, value: f64::INFINITY };
            }
        }
    }

    let growth_ok = min_d1.value > 0.0 && min_d2.value >= -tol && min_d3.value >= -tol;
    let smoothness_ok = smooth_defined && max_ratio.value.is_finite() && max_ratio.value <= ratio_bound;
    Ok(AdmissibilityReport {
        weight: w.name().to_string(),
        growth_ok,
        smoothness_ok,
        l_used: l,
        tol,
        ratio_bound,
        witness: AdmissibilityWitness { min_d1, min_d2, min_d3, max_tail_ratio: max_ratio },
    })
}
