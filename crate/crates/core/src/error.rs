use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not star-shaped about the origin: {0}")]
    NotStarShaped(String),
    #[error("vertex set is not centrally symmetric (no antipode for vertex {0})")]
    NotSymmetric(usize),
    #[error("origin is not strictly inside the polygon")]
    OriginOutside,
    #[error("invalid exponent p = {0}: need p >= 1")]
    InvalidExponent(f64),
    #[error("sample {index} is not positive and finite: {value}")]
    NonPositiveSample { index: usize, value: f64 },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("({0}, {1}, {2}) is not in the ellipse cone a2 > 0, a2^2 > b2^2 + c2^2")]
    NotInCone(f64, f64, f64),
    #[error("matrix is not symmetric positive definite")]
    NotPd,
    #[error("bad angle order: {0}")]
    BadAngleOrder(String),
    #[error("perturbation left the ellipse cone; use a smaller step")]
    LeftCone,
    #[error("bisection did not converge: bracket {width:e} after {iterations} iterations")]
    NoConvergence { iterations: usize, width: f64 },
    #[error("no alternance: {0}")]
    NoAlternance(String),
    #[error("oracle grid is empty")]
    EmptyGrid,
    #[error("cone condition violated: {0}")]
    ConeViolation(String),
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("invalid body descriptor: {0}")]
    Descriptor(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Numerical failures as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::NoAlternance(_)
                | Error::ConeViolation(_)
                | Error::LeftCone
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
