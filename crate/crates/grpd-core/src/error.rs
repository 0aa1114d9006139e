use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit-code contract:
/// everything here is an input or precondition problem (exit 2) except
/// `Inconsistency`, which signals that two independent methods disagreed
/// and is a bug in this crate, never in the input (exit 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("guard exceeded: {what} would enumerate {size} items, limit {limit} (set GRPD_GUARD_OVERRIDE to raise)")]
    Guard {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("boundary error: {0}")]
    Boundary(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
