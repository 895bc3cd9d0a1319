//! Error type shared by all modules.

use alloc::string::String;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical routines.
///
/// `Domain` and `UnsupportedDimension` indicate invalid inputs; the other
/// variants signal numerical conditions (poles, failed brackets, resonance)
/// that callers are expected to handle structurally.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Dimension outside the supported range of the routine.
    #[error("unsupported dimension N={0}")]
    UnsupportedDimension(u32),

    /// A series, recurrence or iteration failed to converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// An unscaled value exceeds the representable range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Evaluation requested within the configured margin of a pole.
    #[error("pole margin hit: {0}")]
    Pole(String),

    /// Adaptive quadrature could not meet its tolerance.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// Evaluation requested within the margin of the singular period delta.
    #[error("singular point: T={t} within margin of delta={delta}")]
    SingularPoint { t: f64, delta: f64 },

    /// The shooting problem has no solution: `T` resonates with `k delta`.
    #[error("resonance at T={t}: |y(1)|/max|y| = {y_ratio:.3e} below threshold")]
    Resonance { t: f64, y_ratio: f64 },

    /// A root bracket shows no sign change.
    #[error("bracket failure: {0}")]
    Bracket(String),

    /// The transversality certificate failed at a root.
    #[error("transversality failure: {0}")]
    Transversality(String),

    /// A branch profile has a non-positive radius.
    #[error("amplitude too large: min boundary radius {min_r} <= 0")]
    Amplitude { min_r: f64 },

    /// A two-mode profile was requested without a resonant kernel.
    #[error("resonance contract violated: {0}")]
    ResonanceContract(String),

    /// The nodal scan found zero or more than one sign change in a column.
    #[error("nodal count error: column {column} has {count} sign changes")]
    NodalCount { column: usize, count: usize },
}
