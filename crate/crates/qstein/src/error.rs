//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced by operator construction, solvers, and experiment runs.
#[derive(Debug, Error)]
pub enum QsteinError {
    /// An operator would exceed the configured dimension budget.
    #[error("dimension budget exceeded: requested {requested}, cap {cap}")]
    BudgetExceeded { requested: usize, cap: usize },

    /// Matrix shape does not match the declared layout.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A constructed operator violates one of its invariants.
    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    /// A factor index is outside the layout.
    #[error("invalid factor index {index} for layout with {factors} factors")]
    InvalidFactor { index: usize, factors: usize },

    /// A state required to have full rank is rank-deficient.
    #[error("rank-deficient state: minimum eigenvalue {min_eig:.3e}")]
    RankDeficient { min_eig: f64 },

    /// The requested set variant does not support the operation.
    #[error("set representation unsupported: {0}")]
    SetUnsupported(String),

    /// A declared group is not closed under composition.
    #[error("group not closed under composition: {0}")]
    GroupNotClosed(String),

    /// A set declared permutation-closed failed the closure spot check.
    #[error("permutation closure violated: {0}")]
    PermutationClosure(String),

    /// The interior-point solver stopped without a certified solution.
    #[error("SDP solver failed: {0}")]
    SdpFailure(String),

    /// Invalid experiment configuration or fixture.
    #[error("configuration error: {0}")]
    Config(String),

    /// Serialization or file I/O error.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON encode/decode error.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
