use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd of zero forms undefined")]
    GcdOfZeroForms,
    #[error("{0} is undefined for the zero form")]
    ZeroFormArgument(&'static str),

    #[error("not a quadratic form")]
    NotQuadratic,
    #[error("variable out of range: {0}")]
    VariableOutOfRange(String),
    #[error("bad coefficient: {0}")]
    BadCoefficient(String),
    #[error("zero form")]
    ZeroQuadric,
    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("n = {n} exceeds the size guard {max}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid input: {0}")]
    Input(String),

    #[error("rank {rank} of d_{page} at ({i},{j}) violates the dimension bound")]
    RankBound {
        page: usize,
        i: usize,
        j: usize,
        rank: usize,
    },
    #[error("rank parameter must satisfy 1 <= rho <= n+1 (got rho = {rho}, n = {n})")]
    RankParameter { n: usize, rho: usize },
    #[error("inconsistent profile: no branch of the spectral sequence survives")]
    InconsistentProfile,

    #[error("point-count oracle requires n = 2 (got n = {0})")]
    OracleDimension(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
