use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("relations contain a directed cycle: {}", .cycle.join(" < "))]
    CyclicInput { cycle: Vec<String> },

    #[error("line {line}: element `{name}` declared twice")]
    DuplicateElement { name: String, line: usize },

    #[error("unknown element `{name}`")]
    UnknownName { name: String },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("interval enumeration exceeded the cap of {cap} intervals")]
    IntervalExplosion { cap: usize },

    #[error("degeneracy maps do not exist for the semi-simplicial variant {variant}")]
    DegeneracyOnSemiSimplicial { variant: &'static str },

    #[error("structure map {kind} cannot go from level {source_level} to level {target_level}")]
    LevelMismatch {
        kind: String,
        source_level: usize,
        target_level: usize,
    },

    #[error("pullback component is not convex (internal invariant violated)")]
    ConvexityViolation,

    #[error("the relation is not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("degree {requested} is beyond the materialized range (truncated at {bound})")]
    TruncationExceeded { requested: usize, bound: usize },

    #[error("unknown poset family `{0}`")]
    UnknownFamily(String),

    #[error("bad parameters for family `{family}`: {message}")]
    BadParams { family: String, message: String },

    #[error("operands live in different contexts: {0}")]
    ContextMismatch(String),
}
