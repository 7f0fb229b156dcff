use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational `{0}`: expected an integer or `p/q`")]
pub struct ParseRatError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("surface parameter d must be at least 1, got {0}")]
    InvalidSurface(i64),
    #[error("stability point needs T = t^2 > 0, got T = {0}")]
    NonPositiveT(String),
    #[error("the zero class has no kind")]
    ZeroClass,
    #[error("class {0} is not spherical (square {1}, expected -2)")]
    NotSpherical(String, String),
    #[error("central charge of {0} vanishes at this point")]
    ZeroCharge(String),
    #[error("class {0} must have positive rank")]
    NonPositiveRank(String),
    #[error("class {0} must have positive slope at this b")]
    NonPositiveSlope(String),
    #[error("classes {0} and {1} are proportional")]
    ProportionalClasses(String, String),
    #[error("region is empty: {0}")]
    EmptyRegion(String),
    #[error("imaginary part of Z({0}) vanishes along the whole path")]
    DegeneratePath(String),
    #[error("wall does not belong to class {0}: {1}")]
    ForeignWall(String, String),
    #[error("constraint system has a solution set of dimension {0}; at least two independent constraints are required")]
    UnderdeterminedSystem(usize),
    #[error("every point of the solution line is spherical, so integral solutions are unbounded")]
    UnboundedSolutions,
    #[error("limit vector is zero")]
    ZeroVector,
    #[error("class {0} is not orthogonal to {1}")]
    NotOrthogonal(String, String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
