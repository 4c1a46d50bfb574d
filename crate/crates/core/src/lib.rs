//! Numerical machinery for the Fock-type spaces `F²_ψ` on `ℂⁿ`.
//!
//! The space consists of entire functions that are square integrable against
//! `e^{-ψ(|z|²)}` times a normalized Lebesgue measure. Everything in it is
//! driven by the Stieltjes moments
//!
//! ```text
//! c_r = ∫₀^∞ s^r e^{-ψ(s)} ds
//! ```
//!
//! which fix the monomial norms, the generating function `G(t) = Σ t^r / c_r`
//! and the reproducing kernel `K_p(z) = G^{(n-1)}(⟨z,p⟩) / (n-1)!`.
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`]: weight functions `ψ` and their admissibility checks.
//! * [`moments`]: certified quadrature of the moment sequence.
//! * [`kernel`]: truncated evaluation of `G`, its derivatives and `K_p`.
//! * [`operators`]: affine symbols, multipliers and finite sections of
//!   weighted composition operators `f ↦ U·(f∘Γ)`.
//! * [`criteria`]: decision procedures for adjoint, self-adjoint and
//!   co-isometric (weighted) composition operators.
//! * [`verify`]: independent oracles tying the decision procedures to the
//!   behaviour of truncated operator matrices.
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the command
//! line front-end live in the `fockpsi` crate.

#![no_std]
// `!(x > 0.0)` is how NaN gets rejected; quadrature nodes keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod criteria;
mod error;
pub mod kernel;
pub mod linalg;
pub mod moments;
pub mod multiindex;
pub mod operators;
pub mod polynomial;
pub mod quadrature;
pub mod sampling;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use criteria::{CheckOptions, Condition, TheoremTag, Verdict};
pub use kernel::{KernelEvaluator, KernelValue};
pub use linalg::{CMatrix, CVector};
pub use moments::{compute_moments, monomial_norm_sq, MomentTable};
pub use multiindex::{MonomialBasis, MultiIndex};
pub use operators::{AffineMap, TruncatedOperator, WeightSymbol};
pub use polynomial::Polynomial;
pub use verify::ResidualReport;
pub use weights::{check_admissible, AdmissibilityReport, WeightFunction};
