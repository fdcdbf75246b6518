use thiserror::Error;

/// Unified error type for the crate.
///
/// The CLI maps variants to exit codes: configuration problems (including
/// domain and state validation) exit 2, numerical failures exit 3.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside a function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A state or operator fails its structural invariants.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A configuration file failed to parse or validate.
    #[error("config error: {0}")]
    Config(String),

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: {message} (residual estimate {residual:e})")]
    Convergence { message: String, residual: f64 },

    /// The extended-precision series cannot certify the requested digits.
    #[error("cannot certify {requested} digits (achievable: {achieved:.1})")]
    Precision { requested: u32, achieved: f64 },

    /// A wavefunction-based operation received a mixed state.
    #[error("state is not pure (purity {purity}); a wavefunction is undefined")]
    Purity { purity: f64 },

    /// The integration box kept growing without the boundary contribution
    /// falling below tolerance. Expected for non-normalizable evaluators.
    #[error("support appears unbounded: extent {extent} reached the growth cap")]
    UnboundedSupport { extent: f64 },

    /// An evaluator produced a non-finite value on a grid.
    #[error("non-finite value at grid cell ({row},{col}), q={q}, p={p}")]
    PoisonedCell { q: f64, p: f64, row: usize, col: usize },

    /// The moment engine was asked for a degree above its cap.
    #[error("moment degree {degree} exceeds the supported maximum of 8")]
    UnsupportedDegree { degree: u32 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
