//! Error type shared across the crate.
//!
//! Every failure names the violated precondition; no operation silently
//! degrades precision or guesses a coefficient it cannot know.

use alloc::string::String;
use core::fmt;

/// Failures raised by exact computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A coefficient beyond the recorded truncation order was required.
    TruncationInsufficient { needed: i64, have: i64 },
    /// A series did not start with the unit term required by the operation.
    BadLeadingTerm(String),
    /// A Gram or period matrix was not square.
    NotSquare,
    /// A Gram matrix was not symmetric.
    NotSymmetric,
    /// A Gram matrix had an odd diagonal entry.
    NotEven,
    /// A Gram matrix failed Sylvester's positivity criterion.
    NotPositiveDefinite,
    /// Vector length disagreed with the lattice rank.
    RankMismatch { expected: usize, got: usize },
    /// Two Fock vectors were built over different lattices.
    LatticeMismatch,
    /// The operation is not defined on this representation level.
    LevelUnsupported(&'static str),
    /// Division by an exact zero.
    DivisionByZero,
    /// The graph of `phi` failed the residue-pairing isotropy test at `(i, j)`.
    GraphNotIsotropic { i: i64, j: i64 },
    /// The frame forms are linearly dependent.
    FrameDegenerate,
    /// The period matrix is not a Siegel point.
    OmegaNotSiegel(String),
    /// An integer block matrix failed the symplectic condition.
    NotSymplectic,
    /// A matrix that must be inverted was singular.
    SingularFactor,
    /// The frame forms did not reach full rank on the truncated graph.
    RankDeficient { rank: usize, expected: usize },
    /// The requested computation does not fit inside the given margins.
    MarginTooSmall(String),
    /// The quadratic generator is diagonalizable, not nilpotent.
    NotNilpotent,
    /// The `(m, n)` pair is outside the supported generator family.
    InvalidGenerator(String),
    /// The gap set of an outgoing lattice has the wrong cardinality.
    GapSetIncomplete { found: usize, expected: usize },
    /// The curve data is not a monic squarefree odd-degree model.
    InvalidCurve(String),
    /// A scalar or series literal could not be parsed.
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TruncationInsufficient { needed, have } => write!(
                f,
                "truncation insufficient: coefficient at order {needed} requested, known through {have}"
            ),
            Error::BadLeadingTerm(msg) => write!(f, "bad leading term: {msg}"),
            Error::NotSquare => write!(f, "matrix is not square"),
            Error::NotSymmetric => write!(f, "gram matrix is not symmetric"),
            Error::NotEven => write!(f, "gram matrix has an odd diagonal entry"),
            Error::NotPositiveDefinite => write!(f, "gram matrix is not positive definite"),
            Error::RankMismatch { expected, got } => {
                write!(f, "rank mismatch: expected {expected} components, got {got}")
            }
            Error::LatticeMismatch => write!(f, "operands live over different lattices"),
            Error::LevelUnsupported(what) => write!(f, "unsupported on this level: {what}"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::GraphNotIsotropic { i, j } => write!(
                f,
                "graph is not isotropic: residue pairing of rows {i} and {j} is nonzero"
            ),
            Error::FrameDegenerate => write!(f, "frame forms are linearly dependent"),
            Error::OmegaNotSiegel(msg) => write!(f, "period matrix is not a Siegel point: {msg}"),
            Error::NotSymplectic => write!(f, "matrix is not integral symplectic"),
            Error::SingularFactor => write!(f, "matrix factor is singular"),
            Error::RankDeficient { rank, expected } => write!(
                f,
                "frame forms have rank {rank} on the truncated graph, expected {expected}"
            ),
            Error::MarginTooSmall(msg) => write!(f, "margins too small: {msg}"),
            Error::NotNilpotent => {
                write!(f, "generator with opposite modes is diagonalizable, not nilpotent")
            }
            Error::InvalidGenerator(msg) => write!(f, "invalid quadratic generator: {msg}"),
            Error::GapSetIncomplete { found, expected } => {
                write!(f, "gap set has {found} elements, expected {expected}")
            }
            Error::InvalidCurve(msg) => write!(f, "invalid curve: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}
