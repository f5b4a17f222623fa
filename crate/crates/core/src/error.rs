use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar from {0:?}")]
pub struct ScalarParseError(pub String);

/// Errors raised by shape constructions and model operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("relation has a cycle through {0:?} and {1:?}")]
    CycleDetected(String, String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("unknown shape {0:?}")]
    UnknownShape(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("object {0:?} is not in the target")]
    ObjectNotInTarget(String),
    #[error("functors do not share a target")]
    TargetMismatch,
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map is not monotone: {0:?} <= {1:?} but images are unrelated")]
    NotMonotone(String, String),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("functor is not a sieve")]
    NotASieve,
    #[error("functor is not a cosieve")]
    NotACosieve,
    #[error("maps are not composable")]
    CompositionMismatch,
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("invalid category data: {0}")]
    InvalidCategory(String),
    /// `a -> b -> c` composes to something other than `a -> c`.
    #[error("square does not commute: {}->{}->{} differs from {}->{}", .0[0], .0[1], .0[2], .0[0], .0[2])]
    NonCommuting([String; 3]),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
