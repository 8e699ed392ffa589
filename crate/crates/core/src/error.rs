//! Error type shared by every module of the library.

use crate::basis::BasisKind;

/// Errors produced by basis construction, operator assembly, projection, and
/// the time-stepping drivers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Truncation degree above the supported cap (factorial-bearing constants
    /// such as √π·2ⁿ·n! overflow `f64` shortly past n = 128).
    #[error("truncation degree {n} exceeds the supported maximum {max}")]
    TruncationTooLarge { n: usize, max: usize },

    /// A factorial-bearing quantity left the representable `f64` range.
    #[error("floating-point overflow while computing {what}")]
    Overflow { what: String },

    /// Two values built for different basis families (or different truncation
    /// degrees) were combined.
    #[error("basis mismatch: expected {expected:?} with n_max = {expected_n}, got {got:?} with n_max = {got_n}")]
    BasisMismatch {
        expected: BasisKind,
        expected_n: usize,
        got: BasisKind,
        got_n: usize,
    },

    /// The requested operation is only defined for the named basis family.
    #[error("operation `{operation}` is not supported for the {got:?} basis")]
    UnsupportedBasis {
        operation: &'static str,
        got: BasisKind,
    },

    /// Quadrature rule too small for the requested truncation degree.
    #[error("insufficient quadrature: {q} nodes cannot resolve truncation degree {n_max} (need Q > N)")]
    InsufficientQuadrature { q: usize, n_max: usize },

    /// The closed-form advection solution is only derived for first-order
    /// dissipation (k = 1).
    #[error("closed-form solution is only available for dissipation order k = 1 (got k = {k})")]
    UnsupportedOrder { k: usize },

    /// A coefficient slice had the wrong length for its basis.
    #[error("length mismatch: expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Configuration or argument validation failure.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The fixed-point sweep resolving the implicit field coupling did not
    /// reach the requested tolerance.
    #[error("fixed-point iteration did not converge: {iterations} sweeps, residual {residual:.3e} > tolerance {tolerance:.3e}")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    /// A linear update matrix was singular to working precision.
    #[error("singular linear update in {0}")]
    SingularUpdate(&'static str),

    /// A diagnostic or state entry stopped being finite (solver blow-up guard).
    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
