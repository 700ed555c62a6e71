use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero-polynomial")]
    ZeroPolynomial,
    #[error("out-of-domain: {0}")]
    OutOfDomain(String),
    #[error("discontinuous piecewise polynomial at breakpoint {0}")]
    Discontinuous(String),
    #[error("malformed: {0}")]
    Malformed(String),
    #[error("not-well-formed: weights {0:?}")]
    NotWellFormed([u64; 3]),
    #[error("empty-curve")]
    EmptyCurve,
    #[error("not-contracted-here: {0}")]
    NotContractedHere(String),
    #[error("not-in-D1-family: {0}")]
    NotInD1Family(String),
    #[error("outside-family: {0}")]
    OutsideFamily(String),
    #[error("missing-t-squared")]
    MissingTSquared,
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("unknown point '{0}'")]
    UnknownPoint(String),
}

impl Error {
    /// Stable short code used in JSON error payloads and by the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroPolynomial => "zero-polynomial",
            Error::OutOfDomain(_) => "out-of-domain",
            Error::Discontinuous(_) => "discontinuous",
            Error::Malformed(_) => "malformed",
            Error::NotWellFormed(_) => "not-well-formed",
            Error::EmptyCurve => "empty-curve",
            Error::NotContractedHere(_) => "not-contracted-here",
            Error::NotInD1Family(_) => "not-in-D1-family",
            Error::OutsideFamily(_) => "outside-family",
            Error::MissingTSquared => "missing-t-squared",
            Error::Degenerate(_) => "degenerate",
            Error::UnknownPoint(_) => "unknown-point",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
