use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedSyntax(String),

    #[error("arc label {label} appears {count} times (expected exactly 2)")]
    ArcMultiplicity { label: u32, count: usize },

    #[error("diagram has more than one component ({visited} of {total} crossing slots reachable from the first strand)")]
    MultiComponent { visited: usize, total: usize },

    #[error("under-strand directions are inconsistent with a single orientation (crossing {0})")]
    InconsistentOrientation(usize),

    #[error("T({p},{q}) is a link: gcd(p,q) != 1")]
    NonCoprime { p: i64, q: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource budget exceeded: {0}")]
    ResourceBudgetExceeded(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("no tau value known for {0}")]
    UnknownTau(String),

    #[error("unknown knot name '{0}'")]
    UnknownKnot(String),

    #[error("step-function shape violated: {0}")]
    MonotonicityViolation(String),

    #[error("connected-sum inequality violated: {0}")]
    InequalityViolation(String),

    #[error("no ledger entry for leaf {0}")]
    MissingLeaf(String),

    #[error("ledger entry for {0} would become empty")]
    InconsistentLedger(String),
}
