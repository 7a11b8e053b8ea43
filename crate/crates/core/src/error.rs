use thiserror::Error;

/// Errors raised by every operation in this crate.
///
/// Each variant maps onto a stable numeric code (see [`Error::code`]) so the
/// command line front end can report categorized exit statuses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),

    /// An exhaustive routine was asked to run beyond its size cap.
    #[error("{what} is {got}, exceeding the exhaustive-check cap of {cap}")]
    SizeCap {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// No assignment or feasible solution exists.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Text input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Randomized generation gave up after its attempt budget.
    #[error("generation failed after {attempts} attempts: {msg}")]
    Generation { attempts: usize, msg: String },
}

impl Error {
    /// Stable code used for process exit statuses.
    pub fn code(&self) -> i32 {
        match self {
            Error::Input(_) => 10,
            Error::SizeCap { .. } => 11,
            Error::Precondition(_) => 12,
            Error::Infeasible(_) => 13,
            Error::Parse { .. } => 14,
            Error::Generation { .. } => 15,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn cap(what: &'static str, cap: usize, got: usize) -> Result<()> {
        if got > cap {
            Err(Error::SizeCap { what, cap, got })
        } else {
            Ok(())
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
