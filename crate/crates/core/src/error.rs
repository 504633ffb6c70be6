use thiserror::Error;

/// Errors produced by field construction, coding and repair.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("invalid field parameters: {0}")]
    InvalidParameters(String),
    #[error("field of size {0} exceeds the table bound 2^20")]
    TableTooLarge(u64),
    #[error("field of size {size} exceeds the oracle bound {bound}")]
    FieldTooLarge { size: u64, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("k = {k} is outside [1, {max}]")]
    KOutOfRange { k: usize, max: usize },
    #[error("k = {k} exceeds the trace-repair bound q^t - q^(t-1) = {max}")]
    KTooLargeForGw { k: usize, max: usize },
    #[error("r = {r} is outside [0, {max}]")]
    ROutOfRange { r: u64, max: u64 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("position {0} is already erased")]
    AlreadyErased(usize),
    #[error("position {0} is erased")]
    ErasedRead(usize),
    #[error("position {pos} is outside the codeword of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("need {needed} helper positions, got {got}")]
    InsufficientHelpers { needed: usize, got: usize },
    #[error("helper positions contain duplicates")]
    DuplicatePositions,
    #[error("repair needs a codeword of length {expected} erased exactly at position {position}")]
    BadErasure { expected: usize, position: usize },
    #[error("read of omitted position {0} is not allowed by the repair plan")]
    ForbiddenRead(usize),
    #[error("trace download incomplete: missing entry for w^{0}")]
    IncompleteDownload(u64),
    #[error("trace vector incomplete: missing entry for w^{0}")]
    IncompleteTraces(u64),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix entry ({row}, {col}) is not in the base field")]
    EntryNotInSubfield { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed repair plan: {0}")]
    MalformedPlan(String),
}

pub type Result<T> = std::result::Result<T, Error>;
