use thiserror::Error;

/// Errors raised by the library. Variants map one-to-one onto the error codes
/// used by the command-line front end and the trace documents.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("DIVISION-BY-ZERO")]
    DivisionByZero,
    #[error("FIELD-MISMATCH: {0}")]
    FieldMismatch(String),
    #[error("PARSE: {0}")]
    Parse(String),
    #[error("CONTEXT-MISMATCH: {0}")]
    ContextMismatch(String),
    #[error("FRAME-MISMATCH: {0}")]
    FrameMismatch(String),
    #[error("NOT-A-SUBGROUP: {0}")]
    NotASubgroup(String),
    #[error("NO-RELATION")]
    NoRelation,
    #[error("AMBIGUOUS: relation space has dimension {0}")]
    Ambiguous(usize),
    #[error("VALUE-MISMATCH: {0}")]
    ValueMismatch(String),
    #[error("PRECONDITION: {0}")]
    Precondition(String),
    #[error("STEP-BOUND-EXCEEDED after {0} steps")]
    StepBoundExceeded(usize),
    #[error("UNSUPPORTED: {0}")]
    Unsupported(String),
    #[error("PRECONDITION-VALUE-IN-GROUP: nu*(x_m) = {0} lies in the base value group")]
    PreconditionValueInGroup(String),
    #[error("PRECONDITION-VALUE-NOT-IN-GROUP: nu*(x_m) = {0} is outside the base value group")]
    PreconditionValueNotInGroup(String),
    #[error("BINOMIAL-OBSTRUCTION: {0}")]
    BinomialObstruction(String),
    #[error("NOT-CASE2: {0}")]
    NotCase2(String),
    #[error("NOT-OSTROWSKI: {0}")]
    NotOstrowski(String),
    #[error("JUMP-NOT-GT-ONE: family {0}")]
    JumpNotGreaterThanOne(usize),
    #[error("TRUNCATION-EXHAUSTED: {0}")]
    TruncationExhausted(String),
    #[error("INCONSISTENT-ARC: {0}")]
    InconsistentArc(String),
    #[error("REPLAY-MISMATCH at step {step}: {detail}")]
    ReplayMismatch { step: usize, detail: String },
    #[error("INTERNAL: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
