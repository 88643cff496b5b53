//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square or has inconsistent row lengths")]
    BadShape,
    #[error("non-finite entry at row {row}, column {col}")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generator is not skew-Hermitian (‖G + G†‖_max = {deviation:.3e})")]
    NotSkewHermitian { deviation: f64 },
    #[error("matrix is not Hermitian (‖H − H†‖_max = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary (residual {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("basis columns are not orthonormal (Gram residual {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },
    #[error("state is not normalized (norm {norm})")]
    StateNotNormalized { norm: f64 },
    #[error("eigensolver failed to converge (residual {residual:.3e})")]
    ConvergenceFailure { residual: f64 },
    #[error("family has no segments")]
    EmptyFamily,
    #[error("segment duration must be positive (got {duration})")]
    NonPositiveDuration { duration: f64 },
    #[error("family is not parallel-transporting (residual {residual:.3e})")]
    NotParallelTransported { residual: f64 },
    #[error("integration grid too coarse (residual {residual:.3e}); increase samples_per_segment")]
    IntegrationTooCoarse { residual: f64 },
    #[error("repeated index {index} in γ index tuple")]
    RepeatedIndex { index: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("nodal point: |γ| = {magnitude:.3e} is at or below the nodal tolerance; phase factor undefined")]
    NodalPoint { magnitude: f64 },
    #[error("consecutive state overlap {magnitude:.3e} too small; refine the grid")]
    VanishingOverlap { magnitude: f64 },
    #[error("path endpoints are antipodal; geodesic closure is ambiguous and must be supplied")]
    GeodesicAmbiguous,
    #[error("repeated adjacent path vertex at position {index}")]
    DegenerateVertex { index: usize },
    #[error("path is not closed (endpoint gap {gap:.3e})")]
    PathNotClosed { gap: f64 },
    #[error("consecutive path points {index} and {next} are {angle:.3} rad apart; sample more densely")]
    PathTooCoarse { index: usize, next: usize, angle: f64 },
    #[error("invariant violated: {what}")]
    InvariantViolation { what: String },
    #[error("dimension {dim} is not a power of two; bit-string labels unavailable")]
    NotPowerOfTwo { dim: usize },
    #[error("assignment search over {dim}! permutations exceeds the supported size (max dimension 8)")]
    SearchSpaceTooLarge { dim: usize },
    #[error("visibility search found {found} of {expected} distinct phases; missing {missing:?}")]
    IncompleteExtraction {
        found: usize,
        expected: usize,
        missing: Vec<f64>,
    },
}
