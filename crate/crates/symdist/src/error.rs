use std::fmt;

/// Unified error type for the whole toolkit.
///
/// CLI exit-code mapping: verification failures and infeasibility are not
/// errors (they are negative results carried in the result types); errors
/// here are either usage problems (exit 2) or exhausted budgets (exit 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A subset index fell outside `[1, n]`.
    IndexOutOfRange { index: u32, n: u32 },
    /// An element arity or sequence length did not match the declared shape.
    DimensionMismatch { expected: usize, got: usize },
    /// A numeric argument fell outside the domain of the requested quantity.
    DomainError(String),
    /// The requested operation's hypotheses exclude these parameters.
    HypothesisViolated(String),
    /// The counted family is empty (or the count formula went nonpositive).
    DegenerateFamily,
    /// The verification table would exceed the configured entry budget.
    /// Enable chunked two-pass mode to trade passes for memory.
    MemoryBudgetExceeded { needed: u64, budget: u64 },
    /// A node or wall-clock budget ran out before the answer was decided.
    BudgetExceeded { nodes: u64 },
    /// Probabilistic construction failed in every attempt.
    RetriesExhausted { attempts: u32 },
    /// The exact variance decomposition failed to balance. This invalidates
    /// the closed-form coefficients and everything layered on them, so
    /// callers must treat it as fatal.
    IdentityViolated { lhs: String, rhs: String },
    /// Report inputs had inconsistent schemas or conflicting duplicate keys.
    SchemaMismatch(String),
    /// Malformed input file or parameter string.
    Parse(String),
    /// Underlying I/O failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IndexOutOfRange { index, n } => {
                write!(f, "subset index {index} out of range 1..={n}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::DegenerateFamily => write!(f, "degenerate family: no qualifying subsets"),
            Error::MemoryBudgetExceeded { needed, budget } => write!(
                f,
                "memory budget exceeded: {needed} table entries needed, budget {budget}; \
                 enable chunked two-pass mode"
            ),
            Error::BudgetExceeded { nodes } => {
                write!(f, "budget exceeded after {nodes} nodes")
            }
            Error::RetriesExhausted { attempts } => {
                write!(f, "construction failed after {attempts} attempts")
            }
            Error::IdentityViolated { lhs, rhs } => {
                write!(
                    f,
                    "variance decomposition identity violated: {lhs} != {rhs}"
                )
            }
            Error::SchemaMismatch(msg) => write!(f, "schema mismatch: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
