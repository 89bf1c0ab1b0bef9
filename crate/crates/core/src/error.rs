use thiserror::Error;

/// Errors shared across the crate.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in, so the error type stays object-safe and printable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SqzError {
    /// Position outside the classically allowed region of a WKB state.
    #[error("x = {x} lies outside the classically allowed region |x| < {epsilon}")]
    ClassicallyForbidden { x: f64, epsilon: f64 },

    /// Position inside the guard band around a turning point, where the
    /// primitive WKB form diverges.
    #[error("x = {x} is within the turning-point guard band of +/-{epsilon}")]
    TurningPointRegion { x: f64, epsilon: f64 },

    /// Operation requires unequal squeezing between the two trajectories.
    #[error("r = {r} gives degenerate (identical) squeezing; no isolated crossing exists")]
    DegenerateSqueezing { r: f64 },

    /// The two phase-space trajectories do not intersect.
    #[error("trajectories for m = {m}, n = {n} at r = {r} do not cross")]
    NoCrossing { m: usize, n: usize, r: f64 },

    /// Trajectories meet tangentially; the stationary-phase area diverges.
    #[error("tangential crossing for m = {m}, n = {n} at r = {r}; overlap area diverges")]
    TangencyDivergence { m: usize, n: usize, r: f64 },

    /// The three-term recurrence lost all significant digits.
    #[error("recurrence for m = {m}, n = {n} at r = {r} is unstable")]
    RecurrenceUnstable { m: usize, n: usize, r: f64 },

    /// Requested quadrature order exceeds the supported cap.
    #[error("quadrature order {requested} exceeds cap {cap}")]
    QuadratureOrderExceeded { requested: usize, cap: usize },

    /// Adaptive integration ran out of interval budget before reaching the
    /// requested tolerance.
    #[error("adaptive integration stopped at error {achieved:e} > tolerance {requested:e}")]
    NonConvergence { achieved: f64, requested: f64 },

    /// Distribution does not extend far enough for the requested statistic.
    #[error("distribution of length {len} is too short: {reason}")]
    RangeTooShort { len: usize, reason: &'static str },

    /// Two distributions cannot be compared entry by entry.
    #[error("distributions are incompatible: {reason}")]
    IncompatibleDistributions { reason: String },

    /// Scalar conversion failed (out of range for the target type).
    #[error("value {0} is not representable in the working scalar type")]
    Unrepresentable(f64),
}

pub type Result<T> = std::result::Result<T, SqzError>;
