use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum DehpError {
    /// Tensor or operator dimensions do not match.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A model parameter violates its domain (singular denominator, zero
    /// coupling, unsupported spin, ...).
    #[error("parameter domain: {0}")]
    ParameterDomain(String),

    /// Requested state or operator exceeds the configured size cap.
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    /// An operation received an identically zero state or tensor.
    #[error("zero input: {0}")]
    ZeroInput(String),

    /// Series arithmetic failure (e.g. inverting a series with vanishing
    /// constant term).
    #[error("series: {0}")]
    Series(String),

    /// A dense-symmetric code path received a non-Hermitian operator.
    #[error("operator is not Hermitian: deviation {0:.3e}")]
    NotHermitian(f64),

    /// Subspace handed to the momentum filter is not closed under
    /// translation.
    #[error("subspace not translation-invariant: closure residual {0:.3e}")]
    NotTranslationInvariant(f64),

    /// A required error-tensor slot is missing.
    #[error("missing error-tensor slot: {0}")]
    MissingSlot(String),
}
