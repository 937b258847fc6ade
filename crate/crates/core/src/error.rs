use thiserror::Error;

/// Errors surfaced by the algebra engine. Validation failures carry a
/// minimal witness (basis names) so reports can point at the offending data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational `{0}` (expected `p/q` or `p`)")]
    RationalParse(String),

    #[error("algebra load error: {0}")]
    AlgebraLoad(String),

    #[error("bracket is not degree-homogeneous of degree 0: [{left}, {right}] has a component on `{result}` of degree {found}, expected {expected}")]
    BracketDegree {
        left: String,
        right: String,
        result: String,
        found: i64,
        expected: i64,
    },

    #[error("graded antisymmetry violated on ({left}, {right})")]
    AntisymmetryViolation { left: String, right: String },

    #[error("Jacobi identity violated on ({x}, {y}, {z})")]
    JacobiViolation { x: String, y: String, z: String },

    #[error("arity mismatch: group algebra element acts on {expected} tensor slots, element has {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("truncation overflow: product of degrees {left} and {right} exceeds cap {trunc}")]
    TruncationOverflow {
        left: usize,
        right: usize,
        trunc: usize,
    },

    #[error("truncation too small: need at least {needed}, have {trunc}")]
    TruncationTooSmall { needed: usize, trunc: usize },

    #[error("triple is not tame; operation requires tameness (witness: [{x}, {y}] has h-part bracketing {z} nontrivially)")]
    TamenessRequired { x: String, y: String, z: String },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}
