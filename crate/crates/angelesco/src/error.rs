//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter set violates a documented invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Evaluation point outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Point lies on a branch cut.
    #[error("branch cut: {0}")]
    BranchCut(String),

    /// Root tracking lost its labels (path too close to a branch point).
    #[error("branch tracking failed: {0}")]
    Tracking(String),

    /// Requested accuracy could not be reached.
    #[error("accuracy error: requested {requested} digits, achieved about {achieved}: {context}")]
    Accuracy {
        requested: u32,
        achieved: u32,
        context: String,
    },

    /// A cubic expected to have three real roots does not.
    #[error("curve degeneracy: {0}")]
    CurveDegenerate(String),

    /// Linear solve residual exceeded tolerance.
    #[error("conditioning error: estimated digit loss {digit_loss}: {context}")]
    Conditioning { digit_loss: u32, context: String },

    /// Contour truncation tail bound could not be met.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// Evaluation point too close to a sector boundary ray.
    #[error("ambiguous sector: {0}")]
    AmbiguousSector(String),

    /// Equilibrium consistency check failed.
    #[error("equilibrium consistency: {0}")]
    Equilibrium(String),

    /// Evaluation at a pole of a rational map.
    #[error("pole: {0}")]
    Pole(String),

    #[error("zero count mismatch: {0}")]
    ZeroCount(String),

    #[error("serialization: {0}")]
    Serialization(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
