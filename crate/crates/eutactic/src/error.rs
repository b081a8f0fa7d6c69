use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Two values from different numeric backends met in one computation.
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(&'static str, &'static str),

    /// Inversion or division by an exact or floating zero.
    #[error("division by zero")]
    DivisionByZero,

    /// Operand shapes do not line up.
    #[error("dimension mismatch: {context} ({left} vs {right})")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    /// An index referred to a coordinate, message, or plane that does not exist.
    #[error("index out of range: {context} ({index} not below {bound})")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        bound: usize,
    },

    /// A rotation angle has no representation on the exact backend.
    /// Exact rotations require a multiple of pi/4 so that the cosine and
    /// sine stay inside Q(sqrt 2).
    #[error("angle not representable on the exact backend: {0}")]
    NonRepresentableAngle(String),

    /// An operation that needs an in-field square root met a value whose
    /// root lies outside Q(sqrt 2).
    #[error("square root of {0} is not in Q(sqrt 2)")]
    NoExactSquareRoot(String),

    /// An operation required the float backend (eigenvalues, leakage).
    #[error("operation requires the float backend")]
    FloatBackendRequired,

    /// A matrix expected to be symmetric was not.
    #[error("matrix is not symmetric (entry ({i},{j}) differs from ({j},{i}) by {diff:e})")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    /// The Jacobi iteration failed to reach its off-diagonal target.
    #[error("eigenvalue iteration did not converge (off-diagonal norm {0:e})")]
    NoConvergence(f64),

    /// Vectors expected to be orthonormal were not; carries the offending
    /// pair (i == j means a non-unit norm) and the inner product found.
    #[error("vectors {i} and {j} are not orthonormal: inner product {inner}")]
    NotOrthonormal { i: usize, j: usize, inner: String },

    /// A star failed the Parseval check where one was required.
    #[error("star is not Parseval: defect norm {defect:e}")]
    NotParseval { defect: f64 },

    /// Gram-Schmidt ran out of usable candidates while extending a star
    /// to an orthonormal basis.
    #[error("orthogonal completion failed: {0}")]
    CompletionFailed(&'static str),

    /// Coordinate projectors in a split overlap or fail to cover.
    #[error("invalid split: {0}")]
    InvalidSplit(String),

    /// Recombination was attempted without the full set of shares.
    /// Coordinates are zero-based.
    #[error("incomplete share set: zero-based coordinates {missing:?} are covered by no share")]
    IncompleteShares { missing: Vec<usize> },

    /// A share fragment had support outside its projector's kept set.
    #[error("share fragment {fragment} has support outside kept coordinate {coord}")]
    FragmentOutsideProjector { fragment: usize, coord: usize },

    /// A state matched no codeword cleanly enough to decode.
    #[error("ambiguous state: best overlap {best:e}, runner-up {runner:e}")]
    AmbiguousState { best: f64, runner: f64 },

    /// The zero vector carries no message.
    #[error("cannot decode the zero state")]
    ZeroState,

    /// A codebook needs at least two codewords and at most dim of them.
    #[error("invalid codebook size: {count} codewords in dimension {dim}")]
    InvalidCodebookSize { count: usize, dim: usize },

    /// Fewer than two nonzero fragments: nothing to compare.
    #[error("share holds {0} nonzero fragment(s); need at least 2")]
    TooFewFragments(usize),

    /// Priors must be nonnegative and sum to one.
    #[error("invalid priors: {0}")]
    InvalidPriors(String),

    /// A matrix expected to be orthogonal was not.
    #[error("matrix is not orthogonal: defect norm {defect:e}")]
    NotOrthogonal { defect: f64 },

    /// Invalid Monte-Carlo configuration.
    #[error("invalid simulation: {0}")]
    Simulation(&'static str),

    /// Text input failed to parse; positions are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
