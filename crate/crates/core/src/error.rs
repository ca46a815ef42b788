use thiserror::Error;

/// Failure classes shared by every operation in the crate.
///
/// The CLI maps these onto exit codes, so the variants are coarse on purpose:
/// callers branch on the class, the message carries the detail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvError {
    #[error("input error: {0}")]
    Input(String),
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("mode error: {0}")]
    Mode(String),
}

pub type Result<T> = std::result::Result<T, InvError>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(InvError::Input(msg.into()))
}
