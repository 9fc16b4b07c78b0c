use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("{what} violated (residual {residual:.3e}, tolerance {tolerance:.1e})")]
    InvariantViolation { what: &'static str, residual: f64, tolerance: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("scale parameter must be positive, got {0}")]
    NonPositiveS(f64),
    #[error("matrix is not in the identity component (boost scale {0})")]
    NotInConnectedComponent(f64),
    #[error("elements are not composable (mismatch {mismatch:.3e})")]
    NotComposable { mismatch: f64 },
    #[error("frame change is not block diagonal (deviation {deviation:.3e})")]
    B0MatchFailure { deviation: f64 },
    #[error("point too close to the chart pole (1 - alpha = {one_minus_alpha:.3e})")]
    ChartSingularity { one_minus_alpha: f64 },
    #[error("point outside the chart domain: {what} = {value:.3e}")]
    OutsideChart { what: &'static str, value: f64 },
    #[error("point is off the unit-scale slice (s = {0})")]
    SliceViolation(f64),
    #[error("least-squares system has rank {rank}, needs {required}")]
    IllConditioned { rank: usize, required: usize },
    #[error("least-squares residual {residual:.3e} exceeds {tolerance:.1e}")]
    LargeResidual { residual: f64, tolerance: f64 },
}
