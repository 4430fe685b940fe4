use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tail bound unavailable for E_{k} at truncation order {l}")]
    BoundUnavailable { k: u32, l: usize },
    #[error("denominator vanishes at working precision")]
    SingularDenominator,
    #[error("argument is outside the disc of convergence")]
    OutOfDisc,
    #[error("point cannot be reduced into the convergence band")]
    ReductionFailure,
    #[error("point is too close to a lattice point")]
    PoleProximity,
    #[error("derivative vanishes at working precision")]
    ZeroDerivative,
    #[error("invalid CM data: {0}")]
    InvalidCm(String),
    #[error("rounding of {0} is not certified")]
    AmbiguousRounding(String),
    #[error("no square class found for N = {0}")]
    NoSquareFound(u32),
    #[error("value is not a perfect square")]
    NotASquare,
    #[error("domain error: {0}")]
    Domain(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
