use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator x{gen} out of range for {gen_count} generators")]
    GeneratorOutOfRange { gen: u32, gen_count: usize },
    #[error("no image for generator x{0}")]
    UnmappedGenerator(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("braid letter {letter} invalid on {strands} strands")]
    InvalidBraidLetter { letter: i64, strands: usize },
    #[error("closure has {0} components, expected a knot")]
    MultiComponent(usize),
    #[error("generator x{0} is not a meridian")]
    NotMeridian(u32),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("expected {expected} conjugators, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("presentation is not all-meridian: {0}")]
    MixedAbelianization(String),
    #[error("unsupported target group: {0}")]
    UnsupportedTarget(String),
    #[error("empty witness list")]
    EmptyWitnessList,
    #[error("integers {0:?} are not pairwise coprime")]
    NotCoprime(Vec<u64>),
    #[error("malformed word: {0}")]
    Malformed(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownKnot(String),
    #[error("inequality chain violated: {0}")]
    ChainViolation(String),
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
