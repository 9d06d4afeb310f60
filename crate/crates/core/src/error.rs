use thiserror::Error;

/// Errors raised by the library. Every cap violation carries the offending
/// bound so callers can report it instead of silently truncating.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("{what} cap exceeded: need {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: usize,
    },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("partition is not a congruence: {0}")]
    NotCongruence(String),

    #[error("signature has no designated reversible product")]
    NoReversibleProduct,

    #[error("signature has no scalar field")]
    NoScalarField,

    #[error("variable set must be nonempty")]
    EmptyVariables,

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("ill-formed automorphism: {0}")]
    IllFormedAutomorphism(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn cap(what: &'static str, needed: u128, cap: usize) -> Self {
        Error::CapExceeded { what, needed, cap }
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
