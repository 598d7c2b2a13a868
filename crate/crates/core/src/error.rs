//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("objective is unbounded above (exceeded {threshold:e} at {at:?})")]
    UnboundedAbove { threshold: f64, at: Vec<f64> },

    #[error("search region contains no finite values")]
    AllInfinite,

    #[error("point lies outside the declared domain")]
    OutsideDomain,

    #[error("empty graph or domain")]
    EmptyGraph,

    #[error("graph must be sampled for this operation")]
    GraphNotSampled,

    #[error("operation requires a Hilbert-mode space (p2 or weighted2), got {0}")]
    NotHilbert(String),

    #[error("engine cannot handle this function: {0}")]
    EngineMismatch(String),

    #[error("probe function is not convex: {0}")]
    NonConvexProbe(String),

    #[error("downside certificate invalid: {0}")]
    InvalidDownside(String),

    #[error("negative discriminant in stability bound (m = {m} is not a valid infimum)")]
    BadInfimum { m: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("no subgradient within the dual budget: nearest distance {nearest}, budget {budget}")]
    NoNearbySubgradient { nearest: f64, budget: f64 },

    #[error("descent did not terminate within {0} iterations")]
    NonTermination(usize),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("computed result violates a guaranteed bound: {0}")]
    BoundViolated(String),

    #[error("polar region mode requires a one-dimensional space, got dim {0}")]
    RegionRequiresDim1(usize),

    #[error("graph is not monotone: pairing {value} at the listed sample pair")]
    NotMonotone { value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
