//! Decision procedures for adjoint, self-adjoint and co-isometric
//! (weighted) composition operators `C_{U,Γ}` with affine `Γ(z) = Cz + D`.
//!
//! Every procedure returns a [`Verdict`] listing the conditions it checked.
//! Procedures backed by a one-directional result set `necessary_only` and
//! never report `satisfied = true`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::kernel::KernelEvaluator;
use crate::linalg::{self, CVector};
use crate::operators::{defect_coisometry, defect_isometry, truncated_matrix, AffineMap, WeightSymbol};
use crate::sampling;
use crate::{Complex64, Error, Result};

/// Largest admissible `‖C‖ - 1` for the contraction hypothesis.
pub const CONTRACTION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Algebraic matrix conditions.
    pub matrix_tol: f64,
    /// Conditions involving kernel series.
    pub series_tol: f64,
    /// Random points (or point pairs) for sampled identities.
    pub samples: usize,
    pub seed: u64,
    pub sample_radius: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { matrix_tol: 1e-9, series_tol: 1e-7, samples: 64, seed: 20_240_601, sample_radius: 2.0 }
    }
}

impl CheckOptions {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremTag {
    AdjointCompositionPair,
    SelfAdjointComposition,
    AdjointWeightedPair,
    SelfAdjointWeightedLinear,
    SelfAdjointWeightedConstant,
    SelfAdjointWeightedAffine,
    CoisometryComposition,
    UnitaryComposition,
    CoisometryWeightedLinear,
    CoisometryWeightedConstant,
    CoisometryWeightedAffine,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 11] = [
        TheoremTag::AdjointCompositionPair,
        TheoremTag::SelfAdjointComposition,
        TheoremTag::AdjointWeightedPair,
        TheoremTag::SelfAdjointWeightedLinear,
        TheoremTag::SelfAdjointWeightedConstant,
        TheoremTag::SelfAdjointWeightedAffine,
        TheoremTag::CoisometryComposition,
        TheoremTag::UnitaryComposition,
        TheoremTag::CoisometryWeightedLinear,
        TheoremTag::CoisometryWeightedConstant,
        TheoremTag::CoisometryWeightedAffine,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::AdjointCompositionPair => "adjoint-composition-pair",
            TheoremTag::SelfAdjointComposition => "self-adjoint-composition",
            TheoremTag::AdjointWeightedPair => "adjoint-weighted-pair",
            TheoremTag::SelfAdjointWeightedLinear => "self-adjoint-weighted-linear",
            TheoremTag::SelfAdjointWeightedConstant => "self-adjoint-weighted-constant",
            TheoremTag::SelfAdjointWeightedAffine => "self-adjoint-weighted-affine",
            TheoremTag::CoisometryComposition => "coisometry-composition",
            TheoremTag::UnitaryComposition => "unitary-composition",
            TheoremTag::CoisometryWeightedLinear => "coisometry-weighted-linear",
            TheoremTag::CoisometryWeightedConstant => "coisometry-weighted-constant",
            TheoremTag::CoisometryWeightedAffine => "coisometry-weighted-affine",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem tag `{s}`")))
    }
}

/// One checked condition: passes when `residual ≤ threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
}

impl Condition {
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: residual <= threshold, residual, threshold }
    }

    /// Threshold `tol · max(1, scale)`.
    pub fn scaled(name: impl Into<String>, residual: f64, tol: f64, scale: f64) -> Self {
        Self::new(name, residual, tol * scale.max(1.0))
    }

    /// Positive when passing.
    pub fn margin(&self) -> f64 {
        self.threshold - self.residual
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub theorem: TheoremTag,
    pub satisfied: bool,
    pub necessary_only: bool,
    pub conditions: Vec<Condition>,
    pub notes: Vec<String>,
    pub seed: u64,
}

impl Verdict {
    fn new(theorem: TheoremTag, necessary_only: bool, conditions: Vec<Condition>, notes: Vec<String>, seed: u64) -> Self {
        let hold = conditions.iter().all(|c| c.passed);
        Self { theorem, satisfied: hold && !necessary_only, necessary_only, conditions, notes, seed }
    }

    pub fn conditions_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    /// Largest `residual - threshold` over failed conditions; zero when all pass.
    pub fn failure_margin(&self) -> f64 {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.residual - c.threshold).fold(0.0, f64::max)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn check_n(g: &AffineMap, n: usize) -> Result<()> {
    if g.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.n() });
    }
    Ok(())
}

fn contraction(name: &str, g: &AffineMap) -> Condition {
    Condition::new(format!("contraction {name}"), (g.operator_norm() - 1.0).max(0.0), CONTRACTION_SLACK)
}

fn shift_zero(name: &str, g: &AffineMap, opts: &CheckOptions) -> Condition {
    Condition::new(format!("{name}=0"), g.shift_norm(), opts.matrix_tol)
}

fn hermitian(name: &str, g: &AffineMap, opts: &CheckOptions) -> Condition {
    let c = g.linear_part();
    Condition::scaled(format!("{name} Hermitian"), linalg::hermitian_residual(c), opts.matrix_tol, linalg::max_abs(c))
}

fn unitary(name: &str, g: &AffineMap, opts: &CheckOptions) -> Condition {
    Condition::new(format!("{name} unitary"), linalg::unitary_residual(g.linear_part()), opts.matrix_tol)
}

fn sample_points(n: usize, count: usize, opts: &CheckOptions) -> Vec<CVector> {
    let mut rng = sampling::rng(opts.seed);
    (0..count).map(|_| sampling::point_in_ball(&mut rng, n, opts.sample_radius)).collect()
}

/// `sup |U|`, exact from the representation (`K_q` never vanishes identically).
fn vanishing_residual(u: &WeightSymbol) -> f64 {
    match u {
        WeightSymbol::Zero => 0.0,
        WeightSymbol::Constant(c) => c.norm(),
        WeightSymbol::KernelMultiple { alpha, .. } => alpha.norm(),
        WeightSymbol::Polynomial(p) => p.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max),
    }
}

/// Distance of `U` from a constant, with the tolerance class it should be judged by.
fn nonconstant_residual(
    u: &WeightSymbol,
    ev: &KernelEvaluator,
    points: &[CVector],
    opts: &CheckOptions,
) -> Result<(f64, f64)> {
    Ok(match u {
        WeightSymbol::Zero | WeightSymbol::Constant(_) => (0.0, opts.matrix_tol),
        WeightSymbol::Polynomial(p) => {
            let r = p.terms().filter(|(a, _)| a.degree() > 0).map(|(_, c)| c.norm()).fold(0.0, f64::max);
            (r, opts.matrix_tol)
        }
        WeightSymbol::KernelMultiple { .. } => {
            let u0 = u.eval(&CVector::zeros(ev.n()), ev)?;
            let mut r: f64 = 0.0;
            for z in points {
                r = r.max((u.eval(z, ev)? - u0).norm());
            }
            (r, opts.series_tol)
        }
    })
}

/// `U = α·K_q`: structural for the kernel forms, sampled for polynomials.
fn kernel_form(
    name: String,
    u: &WeightSymbol,
    alpha: Complex64,
    center: &CVector,
    ev: &KernelEvaluator,
    points: &[CVector],
    opts: &CheckOptions,
) -> Result<Condition> {
    if let Some((au, qu)) = u.kernel_form(ev) {
        let residual = if alpha.norm() <= opts.series_tol {
            au.norm()
        } else if au.norm() <= opts.series_tol {
            au.norm().max(alpha.norm() / alpha.norm().max(1.0))
        } else {
            ((au - alpha).norm() / alpha.norm().max(1.0)).max(linalg::norm(&(qu - center)))
        };
        return Ok(Condition::new(name, residual, opts.series_tol));
    }
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for z in points {
        let lhs = u.eval(z, ev)?;
        let rhs = alpha * ev.kernel_eval(center, z)?.value;
        diff = diff.max((lhs - rhs).norm());
        scale = scale.max(lhs.norm()).max(rhs.norm());
    }
    Ok(Condition::scaled(name, diff, opts.series_tol, scale))
}

/// Both sides of `K_z(Γ₂(0)) K_{Γ₁(z)}(w) = K_{Γ₁(0)}(w) K_z(Γ₂(w))`.
pub fn kernel_pair_identity_sides(
    g1: &AffineMap,
    g2: &AffineMap,
    z: &CVector,
    w: &CVector,
    ev: &KernelEvaluator,
) -> Result<(Complex64, Complex64)> {
    let lhs = ev.kernel_eval(z, g2.shift())?.value * ev.kernel_eval(&g1.eval(z)?, w)?.value;
    let rhs = ev.kernel_eval(g1.shift(), w)?.value * ev.kernel_eval(z, &g2.eval(w)?)?.value;
    Ok((lhs, rhs))
}

/// `(max |lhs - rhs|, max side magnitude)` of the kernel pair identity over the pairs.
pub fn kernel_pair_identity_residual(
    g1: &AffineMap,
    g2: &AffineMap,
    pairs: &[(CVector, CVector)],
    ev: &KernelEvaluator,
) -> Result<(f64, f64)> {
    let mut diff: f64 = 0.0;
    let mut side: f64 = 0.0;
    for (z, w) in pairs {
        let (l, r) = kernel_pair_identity_sides(g1, g2, z, w, ev)?;
        diff = diff.max((l - r).norm());
        side = side.max(l.norm()).max(r.norm());
    }
    Ok((diff, side))
}

/// The inner products `⟨(C†)⁻¹D, D⟩` and `⟨C⁻¹D, D⟩`.
pub fn shift_inner_products(g: &AffineMap) -> Result<(Complex64, Complex64)> {
    let c = g.linear_part();
    let d = g.shift();
    let inv = linalg::inverse(c)?;
    let inv_adj = inv.adjoint();
    Ok((linalg::inner(&(inv_adj * d), d), linalg::inner(&(inv * d), d)))
}

/// `G^{(n-1)}` at the two shift inner products; equal when the series balance holds.
pub fn shift_series_sides(g: &AffineMap, ev: &KernelEvaluator) -> Result<(Complex64, Complex64)> {
    let (t1, t2) = shift_inner_products(g)?;
    let k = ev.n() - 1;
    Ok((ev.g_eval(t1, k)?.value, ev.g_eval(t2, k)?.value))
}

/// `C_{Γ₁}* = C_{Γ₂}` iff `D₁ = D₂ = 0` and `C₁† = C₂`.
pub fn adjoint_composition_pair(g1: &AffineMap, g2: &AffineMap, opts: &CheckOptions) -> Result<Verdict> {
    check_n(g2, g1.n())?;
    let (c1, c2) = (g1.linear_part(), g2.linear_part());
    let scale = linalg::max_abs(c1).max(linalg::max_abs(c2));
    let conditions = alloc::vec![
        contraction("C1", g1),
        contraction("C2", g2),
        shift_zero("D1", g1, opts),
        shift_zero("D2", g2, opts),
        Condition::scaled("C1^*=C2", linalg::max_abs(&(c1.adjoint() - c2)), opts.matrix_tol, scale),
    ];
    Ok(Verdict::new(TheoremTag::AdjointCompositionPair, false, conditions, Vec::new(), opts.seed))
}

/// `C_Γ` self-adjoint iff `D = 0` and `C` Hermitian.
pub fn self_adjoint_composition(g: &AffineMap, opts: &CheckOptions) -> Verdict {
    let conditions = alloc::vec![contraction("C", g), shift_zero("D", g, opts), hermitian("C", g, opts)];
    Verdict::new(TheoremTag::SelfAdjointComposition, false, conditions, Vec::new(), opts.seed)
}

/// `C_{U₁,Γ₁}* = C_{U₂,Γ₂}`: both multipliers are kernel multiples tied to
/// `U₁(0)`, and either both vanish or the kernel pair identity holds.
pub fn adjoint_weighted_pair(
    u1: &WeightSymbol,
    g1: &AffineMap,
    u2: &WeightSymbol,
    g2: &AffineMap,
    ev: &KernelEvaluator,
    opts: &CheckOptions,
) -> Result<Verdict> {
    let n = ev.n();
    check_n(g1, n)?;
    check_n(g2, n)?;
    let c = ev.c_n_minus_1();
    let points = sample_points(n, 2 * opts.samples, opts);
    let u10 = u1.eval(&CVector::zeros(n), ev)?;
    let mut conditions = alloc::vec![
        contraction("C1", g1),
        contraction("C2", g2),
        kernel_form("U1 kernel form".into(), u1, u10 * c, g2.shift(), ev, &points, opts)?,
        kernel_form("U2 kernel form".into(), u2, u10.conj() * c, g1.shift(), ev, &points, opts)?,
    ];
    let mut notes = Vec::new();
    if u10.norm() <= opts.series_tol {
        notes.push("U1(0)=0: both multipliers must vanish".to_string());
        conditions.push(Condition::new("U1=0", vanishing_residual(u1), opts.matrix_tol));
        conditions.push(Condition::new("U2=0", vanishing_residual(u2), opts.matrix_tol));
    } else {
        let pairs: Vec<(CVector, CVector)> =
            points.chunks_exact(2).map(|p| (p[0].clone(), p[1].clone())).collect();
        let (diff, side) = kernel_pair_identity_residual(g1, g2, &pairs, ev)?;
        let residual = if side > 0.0 { diff / side } else { diff };
        conditions.push(Condition::new("kernel pair identity", residual, opts.series_tol));
    }
    Ok(Verdict::new(TheoremTag::AdjointWeightedPair, false, conditions, notes, opts.seed))
}

/// Self-adjointness of `C_{U,Γ}`, dispatched on the shape of `Γ`.
///
/// * `D = 0`: decided exactly (`U ≡ 0`, or `U` a real constant and `C` Hermitian).
/// * `C = 0`: decided exactly (`U = α K_D` with `α` real).
/// * otherwise `C` must be invertible and only necessary conditions are checked.
pub fn self_adjoint_weighted(
    u: &WeightSymbol,
    g: &AffineMap,
    ev: &KernelEvaluator,
    opts: &CheckOptions,
) -> Result<Verdict> {
    let n = ev.n();
    check_n(g, n)?;
    let c = ev.c_n_minus_1();
    let linear = g.shift_norm() <= opts.matrix_tol;
    let constant = !linear && linalg::max_abs(g.linear_part()) <= opts.matrix_tol;
    let tag = if linear {
        TheoremTag::SelfAdjointWeightedLinear
    } else if constant {
        TheoremTag::SelfAdjointWeightedConstant
    } else {
        TheoremTag::SelfAdjointWeightedAffine
    };
    let points = sample_points(n, opts.samples, opts);
    let u0 = u.eval(&CVector::zeros(n), ev)?;
    let mut conditions = alloc::vec![contraction("C", g)];
    let mut notes = Vec::new();

    if vanishing_residual(u) <= opts.matrix_tol {
        notes.push("U=0 gives the zero operator".to_string());
        conditions.push(Condition::new("U=0", vanishing_residual(u), opts.matrix_tol));
        return Ok(Verdict::new(tag, false, conditions, notes, opts.seed));
    }

    if linear {
        let (r, tol) = nonconstant_residual(u, ev, &points, opts)?;
        conditions.push(Condition::scaled("U constant", r, tol, u0.norm()));
        conditions.push(Condition::scaled("U(0) real", u0.im.abs(), opts.matrix_tol, u0.norm()));
        conditions.push(hermitian("C", g, opts));
        return Ok(Verdict::new(tag, false, conditions, notes, opts.seed));
    }

    if constant {
        let alpha = u0 * c;
        conditions.push(kernel_form("U kernel form at D".into(), u, alpha, g.shift(), ev, &points, opts)?);
        conditions.push(Condition::scaled("alpha real", alpha.im.abs(), opts.series_tol, alpha.norm()));
        return Ok(Verdict::new(tag, false, conditions, notes, opts.seed));
    }

    let (t1, t2) = shift_inner_products(g)?;
    let alpha = u0.conj() * c;
    conditions.push(kernel_form("U kernel form at Gamma(0)".into(), u, alpha, g.shift(), ev, &points, opts)?);
    conditions.push(Condition::scaled("alpha real", alpha.im.abs(), opts.series_tol, alpha.norm()));
    let (lhs, rhs) = shift_series_sides(g, ev)?;
    conditions.push(Condition::scaled(
        "shift-series balance",
        (lhs - rhs).norm(),
        opts.series_tol,
        lhs.norm().max(rhs.norm()),
    ));
    notes.push(format!("<(C^*)^-1 D, D> = {t1}, <C^-1 D, D> = {t2}"));
    notes.push(format!(
        "C Hermitian residual {:e} (reported only; not implied by the series balance)",
        linalg::hermitian_residual(g.linear_part())
    ));
    Ok(Verdict::new(tag, true, conditions, notes, opts.seed))
}

/// `C_Γ` co-isometric iff `D = 0` and `C` unitary.
pub fn coisometry_composition(g: &AffineMap, opts: &CheckOptions) -> Verdict {
    let conditions = alloc::vec![contraction("C", g), shift_zero("D", g, opts), unitary("C", g, opts)];
    Verdict::new(TheoremTag::CoisometryComposition, false, conditions, Vec::new(), opts.seed)
}

/// Co-isometry conditions plus both truncated defects of the degree-`max_degree` section.
pub fn unitary_composition(
    g: &AffineMap,
    ev: &KernelEvaluator,
    opts: &CheckOptions,
    max_degree: usize,
) -> Result<Verdict> {
    check_n(g, ev.n())?;
    let mut v = coisometry_composition(g, opts);
    let t = truncated_matrix(&WeightSymbol::one(), g, ev, max_degree)?;
    let mut conditions = core::mem::take(&mut v.conditions);
    conditions.push(Condition::new("truncated co-isometry defect", defect_coisometry(&t), opts.matrix_tol));
    conditions.push(Condition::new("truncated isometry defect", defect_isometry(&t), opts.matrix_tol));
    let notes = alloc::vec![format!("truncation degree {max_degree}, guard {}", t.guard())];
    Ok(Verdict::new(TheoremTag::UnitaryComposition, false, conditions, notes, opts.seed))
}

/// Co-isometry of `C_{U,Γ}`, dispatched on the shape of `Γ`.
///
/// * `D = 0`: decided exactly (`U` a unimodular constant, `C` unitary).
/// * `C = 0`: never a co-isometry.
/// * otherwise, writing `Γ(z) = Cz - D` with `C` invertible and `p = C⁻¹D`,
///   checks the necessary conditions `U = β K_p / ‖K_p‖`,
///   `|β| = √c_{n-1}` and `|p| = |D|`.
pub fn coisometry_weighted(
    u: &WeightSymbol,
    g: &AffineMap,
    ev: &KernelEvaluator,
    opts: &CheckOptions,
) -> Result<Verdict> {
    let n = ev.n();
    check_n(g, n)?;
    let c = ev.c_n_minus_1();
    let points = sample_points(n, opts.samples, opts);
    let u0 = u.eval(&CVector::zeros(n), ev)?;
    let mut conditions = alloc::vec![contraction("C", g)];
    let mut notes = Vec::new();

    if g.shift_norm() <= opts.matrix_tol {
        let (r, tol) = nonconstant_residual(u, ev, &points, opts)?;
        conditions.push(Condition::scaled("U constant", r, tol, u0.norm()));
        conditions.push(Condition::new("|U(0)|=1", (u0.norm() - 1.0).abs(), opts.matrix_tol));
        conditions.push(unitary("C", g, opts));
        return Ok(Verdict::new(TheoremTag::CoisometryWeightedLinear, false, conditions, notes, opts.seed));
    }

    if linalg::max_abs(g.linear_part()) <= opts.matrix_tol {
        notes.push("constant symbol: the range is one-dimensional".to_string());
        conditions.push(Condition::new("Gamma non-constant", 1.0, 0.0));
        return Ok(Verdict::new(TheoremTag::CoisometryWeightedConstant, false, conditions, notes, opts.seed));
    }

    let d = -g.shift().clone();
    let p = linalg::inverse(g.linear_part())? * &d;
    let kp = ev.kernel_norm(&p)?;
    let alpha = u0 * c;
    let beta = alpha * kp;
    let sqrt_c = libm::sqrt(c);
    conditions.push(kernel_form("U kernel form at C^-1 D".into(), u, alpha, &p, ev, &points, opts)?);
    conditions.push(Condition::scaled(
        "|beta|=sqrt(c_{n-1})",
        (beta.norm() - sqrt_c).abs(),
        opts.series_tol,
        sqrt_c,
    ));
    let (np, nd) = (linalg::norm(&p), linalg::norm(&d));
    conditions.push(Condition::scaled("|C^-1 D|=|D|", (np - nd).abs(), opts.matrix_tol, np.max(nd)));
    notes.push(format!("beta = {beta}, |C^-1 D| = {np:e}, |D| = {nd:e}"));
    Ok(Verdict::new(TheoremTag::CoisometryWeightedAffine, true, conditions, notes, opts.seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::moments::compute_moments;
    use crate::weights::WeightFunction;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn classical(n: usize) -> KernelEvaluator {
        let m = compute_moments(&WeightFunction::linear(1.0).unwrap(), 64, 1e-12).unwrap();
        KernelEvaluator::with_defaults(m, n).unwrap()
    }

    fn mat(n: usize, entries: &[Complex64]) -> CMatrix {
        CMatrix::from_row_slice(n, n, entries)
    }

    fn skew() -> CMatrix {
        mat(2, &[c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0)])
    }

    #[test]
    fn tag_names_round_trip() {
        for t in TheoremTag::ALL {
            assert_eq!(t.as_str().parse::<TheoremTag>().unwrap(), t);
        }
        assert!("theorem-2-1".parse::<TheoremTag>().is_err());
    }

    #[test]
    fn composition_pair() {
        let o = CheckOptions::default();
        let s = 1.0 / libm::sqrt(2.0);
        let c1 = mat(2, &[c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]);
        let g1 = AffineMap::linear(c1.clone()).unwrap();
        let g2 = AffineMap::linear(c1.adjoint()).unwrap();
        assert!(adjoint_composition_pair(&g1, &g2, &o).unwrap().satisfied);
        let shifted = AffineMap::new(c1, CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
        let v = adjoint_composition_pair(&shifted, &g2, &o).unwrap();
        assert!(!v.satisfied && !v.condition("D1=0").unwrap().passed);
        assert!(adjoint_composition_pair(&AffineMap::identity(2), &AffineMap::identity(2), &o).unwrap().satisfied);
    }

    #[test]
    fn self_adjoint_examples() {
        let o = CheckOptions::default();
        let proj = mat(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(self_adjoint_composition(&AffineMap::linear(proj).unwrap(), &o).satisfied);
        let v = self_adjoint_composition(&AffineMap::linear(skew()).unwrap(), &o);
        assert!(!v.satisfied && !v.condition("C Hermitian").unwrap().passed);
        assert!(self_adjoint_composition(&AffineMap::linear(CMatrix::zeros(2, 2)).unwrap(), &o).satisfied);
    }

    #[test]
    fn non_contraction_is_flagged() {
        let o = CheckOptions::default();
        let g = AffineMap::linear(CMatrix::identity(1, 1) * c(2.0, 0.0)).unwrap();
        let v = self_adjoint_composition(&g, &o);
        assert!(!v.satisfied && !v.condition("contraction C").unwrap().passed);
    }

    #[test]
    fn weighted_pair_reduces_to_composition_pair() {
        let ev = classical(2);
        let o = CheckOptions::default();
        let cm = mat(2, &[c(0.2, 0.1), c(0.3, 0.0), c(0.0, -0.4), c(0.5, 0.0)]);
        let g1 = AffineMap::linear(cm.clone()).unwrap();
        let g2 = AffineMap::linear(cm.adjoint()).unwrap();
        let one = WeightSymbol::one();
        assert!(adjoint_weighted_pair(&one, &g1, &one, &g2, &ev, &o).unwrap().satisfied);
        let v = adjoint_weighted_pair(&WeightSymbol::Zero, &g1, &WeightSymbol::Zero, &g2, &ev, &o).unwrap();
        assert!(v.satisfied && v.condition("U1=0").is_some());
        let v = adjoint_weighted_pair(&one, &g1, &one, &g1, &ev, &o).unwrap();
        assert!(!v.satisfied);
    }

    #[test]
    fn weighted_pair_translation_fails_kernel_form() {
        let ev = classical(1);
        let o = CheckOptions::default();
        let g = AffineMap::new(CMatrix::identity(1, 1), CVector::from_element(1, c(0.5, 0.0))).unwrap();
        let one = WeightSymbol::one();
        let v = adjoint_weighted_pair(&one, &g, &one, &g, &ev, &o).unwrap();
        assert!(!v.satisfied);
        assert!(!v.condition("U1 kernel form").unwrap().passed);
    }

    #[test]
    fn self_adjoint_weighted_branches() {
        let ev = classical(2);
        let o = CheckOptions::default();
        let h = mat(2, &[c(0.5, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(-0.3, 0.0)]);
        let g = AffineMap::linear(h).unwrap();
        let v = self_adjoint_weighted(&WeightSymbol::Constant(c(3.0, 0.0)), &g, &ev, &o).unwrap();
        assert!(v.satisfied && v.theorem == TheoremTag::SelfAdjointWeightedLinear);
        let v = self_adjoint_weighted(&WeightSymbol::Constant(c(0.0, 1.0)), &AffineMap::identity(2), &ev, &o).unwrap();
        assert!(!v.satisfied && !v.condition("U(0) real").unwrap().passed);

        let d = CVector::from_vec(alloc::vec![c(0.3, 0.4), c(-0.2, 0.0)]);
        let konst = AffineMap::constant(d.clone()).unwrap();
        let u = WeightSymbol::KernelMultiple { alpha: c(1.5, 0.0), center: d.clone() };
        let v = self_adjoint_weighted(&u, &konst, &ev, &o).unwrap();
        assert!(v.satisfied && v.theorem == TheoremTag::SelfAdjointWeightedConstant);
        let u = WeightSymbol::KernelMultiple { alpha: c(1.5, 0.5), center: d };
        assert!(!self_adjoint_weighted(&u, &konst, &ev, &o).unwrap().satisfied);
    }

    #[test]
    fn non_hermitian_series_balance() {
        let ev = classical(2);
        let o = CheckOptions::default();
        let d = CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let g = AffineMap::new(skew(), d.clone()).unwrap();
        let (t1, t2) = shift_inner_products(&g).unwrap();
        assert_eq!((t1, t2), (c(0.0, 0.0), c(0.0, 0.0)));
        let u = WeightSymbol::KernelMultiple { alpha: c(2.0, 0.0), center: d };
        let v = self_adjoint_weighted(&u, &g, &ev, &o).unwrap();
        assert!(v.necessary_only && !v.satisfied && v.conditions_hold(), "{v:?}");
        assert_eq!(v.theorem, TheoremTag::SelfAdjointWeightedAffine);
    }

    #[test]
    fn singular_affine_branch_is_an_error() {
        let ev = classical(2);
        let proj = mat(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let g = AffineMap::new(proj, CVector::from_vec(alloc::vec![c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        let r = self_adjoint_weighted(&WeightSymbol::one(), &g, &ev, &CheckOptions::default());
        assert!(matches!(r, Err(Error::SingularMatrix)));
    }

    #[test]
    fn coisometry_branches() {
        let ev = classical(1);
        let o = CheckOptions::default();
        let rot = AffineMap::linear(CMatrix::from_element(1, 1, c(0.6, 0.8))).unwrap();
        assert!(coisometry_composition(&rot, &o).satisfied);
        assert!(unitary_composition(&rot, &ev, &o, 8).unwrap().satisfied);
        let u = WeightSymbol::Constant(c(0.0, 1.0));
        assert!(coisometry_weighted(&u, &rot, &ev, &o).unwrap().satisfied);
        let v = coisometry_weighted(&WeightSymbol::Constant(c(0.0, 1.1)), &rot, &ev, &o).unwrap();
        assert!(!v.satisfied);

        let konst = AffineMap::constant(CVector::from_element(1, c(0.5, 0.0))).unwrap();
        let v = coisometry_weighted(&u, &konst, &ev, &o).unwrap();
        assert!(!v.satisfied && v.theorem == TheoremTag::CoisometryWeightedConstant);
    }

    #[test]
    fn weyl_type_symbol_passes_necessary_conditions() {
        let ev = classical(1);
        let o = CheckOptions::default();
        let d = CVector::from_element(1, c(0.3, -0.4));
        let g = AffineMap::with_subtracted_shift(CMatrix::identity(1, 1), d.clone()).unwrap();
        let kp = ev.kernel_norm(&d).unwrap();
        let beta = c(0.6, 0.8);
        let u = WeightSymbol::KernelMultiple { alpha: beta / kp, center: d.clone() };
        let v = coisometry_weighted(&u, &g, &ev, &o).unwrap();
        assert!(v.necessary_only && !v.satisfied && v.conditions_hold(), "{v:?}");
        let u = WeightSymbol::KernelMultiple { alpha: beta * 1.1 / kp, center: d };
        let v = coisometry_weighted(&u, &g, &ev, &o).unwrap();
        assert!(!v.conditions_hold() && v.failure_margin() >= 1e-2);
    }
}
