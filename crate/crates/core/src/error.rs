use thiserror::Error;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input: wrong shape, out-of-range parameter, unnormalized state.
    Validation,
    /// A well-formed target that a requested gate family cannot express.
    NotDecomposable,
    /// A numerical guard tripped (leakage, truncation, non-convergence).
    NumericalGuard,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: dimension mismatch, {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension {dim} exceeds the limit of {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("matrix exponential did not converge (residual {residual:e})")]
    NonConvergence { residual: f64 },
    #[error("zero matrix has no well-defined phase")]
    ZeroMatrix,
    #[error("state is not normalized (norm {norm})")]
    Unnormalized { norm: f64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("not decomposable: {0}")]
    NotDecomposable(String),
    #[error("inconsistent target: consistency residual {residual:e} exceeds {tolerance:e}")]
    InconsistentTarget { residual: f64, tolerance: f64 },
    #[error("hyperbolic or parabolic target (trace {trace}); only |a + d| < 2 is supported")]
    HyperbolicRegime { trace: f64 },
    #[error("grid too narrow: edge amplitude ratio {edge_ratio:e} exceeds 1e-6")]
    GridTooNarrow { edge_ratio: f64 },
    #[error("{fraction:e} of the probability mass fell off the grid (limit 1e-3)")]
    Leakage { fraction: f64 },
    #[error("outcome {outcome} has zero probability density ({density:e})")]
    ZeroProbability { outcome: f64, density: f64 },
    #[error("Fock truncation residual {residual:e} exceeds {tolerance:e}")]
    TruncationResidual { residual: f64, tolerance: f64 },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NotDecomposable(_)
            | Error::InconsistentTarget { .. }
            | Error::HyperbolicRegime { .. } => ErrorClass::NotDecomposable,
            Error::NonConvergence { .. }
            | Error::GridTooNarrow { .. }
            | Error::Leakage { .. }
            | Error::TruncationResidual { .. } => ErrorClass::NumericalGuard,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
