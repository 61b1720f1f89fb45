use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the core.
///
/// The variants fall in three families, which the command line maps onto
/// distinct exit codes: invalid input (`InvalidGroup`, `InvalidField`,
/// `InvalidElement`, `Precondition`, `Mismatch`), exhausted search budgets
/// (`BudgetExceeded`), and `TheoremViolation`, which means a computed value
/// contradicts a proven statement and therefore points at a bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    InvalidGroup(String),
    InvalidField(String),
    InvalidElement(String),
    /// Two values built over different groups or fields were combined.
    Mismatch(String),
    /// An operation was called outside its domain (zero inverse, `b = 0` in
    /// an Arf invariant, a hypothesis that does not hold, ...).
    Precondition(String),
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u64,
    },
    TheoremViolation(String),
}

impl Error {
    pub(crate) fn group(msg: impl Into<String>) -> Self {
        Error::InvalidGroup(msg.into())
    }

    pub(crate) fn field(msg: impl Into<String>) -> Self {
        Error::InvalidField(msg.into())
    }

    pub(crate) fn element(msg: impl Into<String>) -> Self {
        Error::InvalidElement(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn violation(msg: impl Into<String>) -> Self {
        Error::TheoremViolation(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGroup(m) => write!(f, "invalid group: {m}"),
            Error::InvalidField(m) => write!(f, "invalid field: {m}"),
            Error::InvalidElement(m) => write!(f, "invalid element: {m}"),
            Error::Mismatch(m) => write!(f, "context mismatch: {m}"),
            Error::Precondition(m) => write!(f, "precondition failed: {m}"),
            Error::BudgetExceeded {
                what,
                required,
                budget,
            } => write!(
                f,
                "budget exceeded: {what} needs {required} nodes, budget is {budget}"
            ),
            Error::TheoremViolation(m) => write!(f, "theorem violation: {m}"),
        }
    }
}

impl core::error::Error for Error {}
