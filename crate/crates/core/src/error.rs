use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `ψ` or one of its derivatives produced NaN or ±∞.
    NonFiniteValue { what: &'static str, y: f64 },
    InvalidGrid(&'static str),
    InvalidExponent(f64),
    TailNotConvergent { r: usize },
    QuadratureBudgetExceeded { evaluations: usize },
    IndexOutOfRange { needed: usize, available: usize },
    TruncationBudgetExceeded { max_terms: usize, tail_bound: f64 },
    DimensionMismatch { expected: usize, found: usize },
    DegreeOverflow { degree: usize, max: usize },
    SingularMatrix,
    InvalidMoments(String),
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFiniteValue { what, y } => write!(f, "{what} is not finite at y = {y}"),
            Error::InvalidGrid(why) => write!(f, "invalid grid: {why}"),
            Error::InvalidExponent(l) => write!(f, "smoothness exponent must be < 1/2, got {l}"),
            Error::TailNotConvergent { r } => {
                write!(f, "integrand tail of moment {r} does not decay fast enough")
            }
            Error::QuadratureBudgetExceeded { evaluations } => {
                write!(f, "quadrature budget exceeded after {evaluations} evaluations")
            }
            Error::IndexOutOfRange { needed, available } => {
                write!(f, "moment c_{needed} needed but the table stops at c_{available}")
            }
            Error::TruncationBudgetExceeded { max_terms, tail_bound } => write!(
                f,
                "series tail bound {tail_bound:e} not reached within {max_terms} terms"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::DegreeOverflow { degree, max } => {
                write!(f, "polynomial degree {degree} exceeds the maximum {max}")
            }
            Error::SingularMatrix => f.write_str("matrix is singular"),
            Error::InvalidMoments(why) => write!(f, "invalid moment table: {why}"),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
        }
    }
}

impl core::error::Error for Error {}
