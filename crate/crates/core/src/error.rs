use alloc::string::String;

/// Errors raised when an operation is called outside its domain.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input out of domain: {0}")]
    Domain(&'static str),
    #[error("ring parameters differ: d = {left} vs d = {right}")]
    RingMismatch { left: u64, right: u64 },
    #[error("iteration cap of {0} steps exceeded")]
    IterationCap(u64),
    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("ill-formed congruence spec: {0}")]
    IllFormedSpec(String),
    #[error("invalid equation instance: {0}")]
    InvalidInstance(String),
    #[error("solution does not satisfy its equation")]
    UnverifiedSolution,
    #[error("certificate leaf at {path} is not closed: {reason}")]
    OpenLeaf { path: String, reason: String },
}

pub type Result<T> = core::result::Result<T, Error>;
