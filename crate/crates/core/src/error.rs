use thiserror::Error;

/// Errors raised by the form, space and complex machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid index range [{lo}:{hi}]")]
    InvalidRange { lo: usize, hi: usize },

    #[error("index {0} is already present")]
    NotDisjoint(usize),

    #[error("index {0} is not present")]
    NotMember(usize),

    #[error("index {index} lies outside [0:{n}]")]
    OutOfRange { index: usize, n: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("cannot lower polynomial degree {actual} to {requested}")]
    DegreeTooLow { requested: usize, actual: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("weights do not sum to one")]
    NotBarycentric,

    #[error("form does not lie in the requested space")]
    NotInSpace,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("simplex {face:?} is not a face of {cell:?}")]
    NotAFace { face: Vec<usize>, cell: Vec<usize> },

    #[error("empty complex")]
    EmptyComplex,

    #[error("cell {cell} has dimension {found}, expected {expected}")]
    NonUniformDimension {
        cell: usize,
        expected: usize,
        found: usize,
    },

    #[error("cells {0} and {1} intersect in a set that is not a face")]
    IntersectionNotAFace(usize, usize),

    #[error("simplex {0:?} is not in the complex")]
    FaceNotInComplex(Vec<usize>),

    #[error("traces disagree on shared face {0:?}")]
    NotSingleValued(Vec<usize>),

    #[error("residual on face {0:?} has nonvanishing boundary traces")]
    ResidueNotTraceFree(Vec<usize>),

    #[error("integration needs a top-degree form, got k={k} on n={n}")]
    NotTopDegree { k: usize, n: usize },

    #[error("expected a square matrix, got {rows}x{cols}")]
    DimensionMismatch { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
