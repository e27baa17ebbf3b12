use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate deformation parameter: q - q^-1 = 0")]
    DegenerateQ,
    #[error("phase ring mismatch: M={left} vs M={right}")]
    RingMismatch { left: u32, right: u32 },
    #[error("phase not representable: {0}")]
    PhaseNotRepresentable(String),
    #[error("invalid phase ring order M={0}")]
    InvalidRing(i64),
    #[error("matrix size {0} is too small")]
    SizeTooSmall(usize),
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("flux {p}/{q} is not in lowest terms")]
    NonCoprimeFlux { p: i64, q: i64 },
    #[error("invalid flux denominator {0}")]
    InvalidFlux(i64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("degree {degree} falls outside the window [{d_min}, {d_max}]")]
    WindowUnderflow { degree: i64, d_min: i64, d_max: i64 },
    #[error("line moves on different lines cannot be composed")]
    MixedLines,
    #[error("syntax error at {line}:{col}: expected {}", expected.join(" | "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
    },
    #[error("star bracket needs mode/weight metadata on `{0}`")]
    MissingWeight(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("evaluation failed at {binding}: {source}")]
    Evaluation {
        binding: String,
        #[source]
        source: Box<Error>,
    },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
