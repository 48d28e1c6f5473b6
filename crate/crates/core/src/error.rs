use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("vertex label collision on `{0}`")]
    LabelCollision(String),
    #[error("vertex order does not match the vertex set")]
    OrderMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("simplex cap {cap} exceeded while enumerating dimension {dim}")]
    CapExceeded { cap: usize, dim: isize },
    #[error("dimension {needed} is required but the complex is built only to dimension {built}")]
    NotBuilt { needed: isize, built: isize },
    #[error("complex is truncated at dimension {0}; build it to its top dimension")]
    Truncated(isize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("simplex {0:?} is not in the complex")]
    SimplexNotFound(Vec<String>),
    #[error("lambda = {0} lies outside (0, 1]")]
    LambdaOutOfRange(f64),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("exact elimination exceeded {0} entries")]
    ExactOverflow(usize),
    #[error("eigenvalues straddle the kernel tolerance {tol:e}")]
    GapAmbiguity { tol: f64 },
    #[error("near-kernel has dimension {found} but the Betti number is {expected}")]
    HarmonicCount { found: usize, expected: usize },
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
    #[error("eigenvalue branch matching is ambiguous: {0}")]
    BranchAmbiguity(String),
    #[error("branch {branch} has fitted slope {slope:.3}, not within tolerance of an even integer")]
    NonEvenSlope { branch: usize, slope: f64 },
    #[error("filtration is not compatible with the coboundary: {0}")]
    Filtration(String),
    #[error("spectral sequence did not stabilize by page {0}")]
    NoStabilization(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("relation is not functional at `{0}`")]
    NonFunctional(String),
    #[error("relation misses target vertex `{0}`")]
    NotSurjective(String),
    #[error("unsupported state ({0}); supply (K, R) through the CycleSource extension point")]
    ExtensionPoint(String),
    #[error("orientation alignment failed: {0}")]
    Orientation(String),
    #[error("cannot glue gadget: {0}")]
    Glue(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
