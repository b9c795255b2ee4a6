use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid population: {0}")]
    InvalidPopulation(String),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    /// `L` lies inside the observed range of `x`, so some `u = L - x` is zero
    /// or the transformed values change sign.
    #[error("degenerate transform: {0}")]
    DegenerateTransform(String),

    #[error("division by zero: {0} is zero")]
    DivisionByZero(&'static str),

    #[error("C({population}, {n}) = {count} subsets exceeds the enumeration cap of {cap}")]
    TooLarge {
        population: usize,
        n: usize,
        count: u128,
        cap: u128,
    },

    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),

    #[error("estimator {0} requires a transform constant L")]
    MissingTransform(&'static str),

    #[error("no first-order variance formula for estimator {0}")]
    Unsupported(&'static str),

    #[error("{failed} of {total} samples failed to evaluate; the design expectation is undefined")]
    CensoredDistribution { failed: usize, total: usize },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
