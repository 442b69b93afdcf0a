use thiserror::Error;

/// Errors produced by the library.
///
/// Parse failures are kept apart from domain failures (size caps, invalid
/// instances) so front ends can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{module}: {what} = {value} exceeds the cap of {cap}")]
    SizeCap {
        module: &'static str,
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("variable index {index} out of range for {n} variables")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("variable {0} is assigned more than once")]
    DuplicateAssignment(usize),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }

    pub(crate) fn cap(module: &'static str, what: &'static str, value: usize, cap: usize) -> Self {
        Error::SizeCap {
            module,
            what,
            value,
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
