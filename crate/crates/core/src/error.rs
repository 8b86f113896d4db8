use thiserror::Error;

/// Failures raised by the numerical models.
///
/// `Domain` covers arguments outside a formula's mathematical domain;
/// `Invalid` covers malformed inputs (shapes, counts, configuration).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("invalid input to {op}: {reason}")]
    Invalid { op: &'static str, reason: String },

    #[error("{op}: singular system ({reason})")]
    Singular { op: &'static str, reason: String },

    #[error("inconsistent readout on channels {channels:?}")]
    InconsistentReadout { channels: Vec<usize> },
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain { op, reason: reason.into() }
    }

    pub(crate) fn invalid(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid { op, reason: reason.into() }
    }

    /// True for errors caused by numeric-domain violations rather than
    /// malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::Singular { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
