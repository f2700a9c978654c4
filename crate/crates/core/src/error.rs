use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group order {order} exceeds the configured bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },
    #[error("coefficient has {found} components but the group has {expected} factors")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("residue {value} out of range for factor Z{modulus}")]
    CoeffOutOfRange { value: i64, modulus: u32 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("duplicate exponent {0}")]
    DuplicateExponent(i64),
    #[error("exponent {exp} outside the configured bound +/-{bound}")]
    ExponentOutOfBounds { exp: i64, bound: i64 },
    #[error("state space of {states} states exceeds the limit {limit}")]
    StateLimitExceeded { states: u128, limit: u64 },
    #[error("target outside window: {0}")]
    TargetOutsideWindow(String),
    #[error("sampling domain is empty: {0}")]
    EmptySampleDomain(String),
    #[error("support of {config} exceeds the decidable window [-{window}, {window}]")]
    SupportExceedsWindow { config: String, window: i64 },
    #[error("window {window} too large for exhaustive checking and no sample budget given")]
    WindowTooLarge { window: i64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("node {0} does not belong to this poset")]
    ForeignNode(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed QSpec: {0}")]
    MalformedQSpec(String),
}
