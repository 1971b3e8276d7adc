use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardyError {
    #[error(
        "unknown catalog symbol `{0}` (expected one of hilbert, min, power, log, sinhratio, sinc)"
    )]
    UnknownSymbol(String),

    #[error("parameter out of range for `{symbol}`: alpha = {alpha} ({admissible})")]
    ParameterDomain {
        symbol: String,
        alpha: f64,
        admissible: &'static str,
    },

    #[error("invalid dimension: {0}")]
    Dimension(String),

    #[error("dimension {requested} exceeds the configured cap of {cap} (set HARDY_SPECTRA_MAX_N to raise it)")]
    Resource { requested: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("quadrature did not reach tolerance {tol:e} (achieved error estimate {achieved:e})")]
    Convergence { tol: f64, achieved: f64 },

    #[error("matrix is not symmetric: max |a_ij - a_ji| = {defect:e} exceeds {allowed:e}")]
    Asymmetric { defect: f64, allowed: f64 },

    #[error("eigensolver failed to converge for eigenvalue {index} after {sweeps} sweeps")]
    SolverNoConvergence { index: usize, sweeps: usize },

    #[error("symbol tail beyond R = {r_cut} carries too much mass; try R = {suggested}")]
    DomainTruncation { r_cut: f64, suggested: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, HardyError>;
