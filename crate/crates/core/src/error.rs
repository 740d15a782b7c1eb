use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("vector of length {found} in a lattice of rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ray index {0} out of range")]
    RayIndexOutOfRange(usize),
    #[error("ray {0} is listed twice")]
    DuplicateRay(usize),
    #[error("cone {0:?} is listed twice")]
    DuplicateCone(Vec<usize>),
    #[error("cone {0:?} has the wrong rank")]
    WrongRank(Vec<usize>),
    #[error("face closure violated at cone {0:?}")]
    FaceClosure(Vec<usize>),
    #[error("cone {0:?} contains a line")]
    NotStrictlyConvex(Vec<usize>),
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("fan is not pure")]
    NotPure,
    #[error("star fan at non-simplicial cone {0} needs product structure")]
    UnsupportedStar(usize),
    #[error("{0} is not a cone of the fan")]
    NotACone(String),
    #[error("weights: {0}")]
    InvalidWeights(String),
    #[error("fan is not balanced")]
    NotBalanced,
    #[error("function: {0}")]
    InvalidFunction(String),
    #[error("not a subfan: {0}")]
    NotASubfan(String),
    #[error("sedentarity set is not down-closed: {0}")]
    InvalidSedentarity(String),
    #[error("({0}, {1}) is not a cover relation")]
    NotACover(usize, usize),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("ambient rank {0} exceeds the supported bound of 12")]
    RankTooLarge(usize),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("parse error: {0}")]
    Parse(String),
}
