use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("duplicate basis name `{0}`")]
    DuplicateBasis(String),
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("arity {arity} exceeds bound {bound}")]
    Arity { arity: usize, bound: usize },
    #[error("inputs are not composable: {0}")]
    NotComposable(String),
    #[error("morphism is not closed: {0}")]
    NotClosed(String),
    #[error("category is not strictly unital: {0}")]
    NotStrictlyUnital(String),
    #[error("category is not cohomologically unital: {0}")]
    NotCUnital(String),
    #[error("invalid twist data: {0}")]
    InvalidTwistData(String),
    #[error("twisted complex is invalid: {0}")]
    InvalidTwisted(String),
    #[error("mismatched modules: {0}")]
    Mismatch(String),
    #[error("hom space is not minimal: {0}")]
    NotMinimal(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
