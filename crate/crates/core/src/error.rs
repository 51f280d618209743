use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("not of affine type: {0}")]
    NotAffine(String),
    #[error("Cartan matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),
    #[error("weight is outside the domain of the bilinear form: {0}")]
    UnsupportedWeight(String),
    #[error("weight has nonzero level and is not in h*_0")]
    NotInH0Star,
    #[error("index {0} is out of range")]
    BadIndex(usize),
    #[error("parameter {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("segment with nonpositive duration")]
    ZeroDuration,
    #[error("segment durations sum to {0}, expected 1")]
    BadTotal(String),
    #[error("path is not in the integral class for index {0}")]
    NonIntegralPath(usize),
    #[error("weight is not dominant for the requested indices")]
    NotDominant,
    #[error("closure did not terminate within {0} elements; index set is not of finite type")]
    NotFiniteType(usize),
    #[error("exploration exceeded the node cap of {0}")]
    CapExceeded(usize),
    #[error("window contains unexplored frontier nodes")]
    IncompleteWindow,
    #[error("expected exactly one dominant extremal element, found {0}")]
    NotUnique(usize),
    #[error("no dominant extremal element in component")]
    NotFound,
    #[error("graph explored to radius {have}, comparison needs {need}")]
    DepthMismatch { have: usize, need: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
