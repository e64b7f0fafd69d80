use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank n = {0} is not supported (need n >= 3)")]
    RankTooSmall(usize),
    #[error("letter {letter} out of range for rank {n}")]
    LetterOutOfRange { letter: usize, n: usize },
    #[error("invalid affine permutation window: {0}")]
    InvalidWindow(String),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("word {0} is not a glide")]
    NotGlide(String),
    #[error("words {0} and {1} do not represent the same element")]
    NotSameElement(String, String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("move {mv:?} is not legal on {word}")]
    IllegalMove { mv: crate::lusztig::Move, word: String },
    #[error("expected {expected} weights, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("weight at position {0} is not strictly positive")]
    NonPositiveWeight(usize),
    #[error("division by zero in {0}")]
    ZeroDenominator(&'static str),
    #[error("crossing parameter {value} between wires {lower} (lower) and {upper} (upper) is not positive")]
    PositivityViolation { lower: usize, upper: usize, value: f64 },
    #[error("set is not a-nice: {0}")]
    NotNice(String),
    #[error("value {0} lies outside the open range spanned by the wire weights")]
    OutOfRange(f64),
    #[error("no partner distinct from b = {0} exists in its component")]
    NoPartner(f64),
    #[error("no rational partner for b = {0}")]
    NoRationalPartner(String),
    #[error("label entry {value} exceeds the evaluation bound {bound}")]
    LabelRange { value: i64, bound: i64 },
    #[error("tau function is not positive at label {0:?}")]
    NonPositiveTau(Vec<i64>),
    #[error("invalid soliton data: {0}")]
    InvalidSpec(String),
    #[error("degenerate soliton: {0}")]
    Degenerate(String),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
