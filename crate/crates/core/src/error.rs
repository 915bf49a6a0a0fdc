use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("norm descriptor is not centrally symmetric")]
    NotSymmetric,

    #[error("norm descriptor is not convex")]
    NotConvex,

    #[error("origin is not strictly inside the unit ball")]
    OriginNotInterior,

    #[error("unit ball is degenerate: {0}")]
    DegenerateBody(String),

    #[error("zero direction vector")]
    ZeroDirection,

    #[error("no points provided")]
    EmptyInput,

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("too many points for this operation: {got} (max {max})")]
    TooManyPoints { got: usize, max: usize },

    #[error("cluster {0} is empty")]
    EmptyCluster(&'static str),

    #[error("hull boundaries do not cross")]
    NoOverlap,

    #[error("hull boundaries touch without crossing transversally")]
    DegenerateArrangement,

    #[error("points are farther apart than 2d")]
    TooFarApart,

    #[error("no ball of the given radius contains the point set")]
    NoBallContainsS,

    #[error("point is not a live member of the tree")]
    NotPresent,

    #[error("invalid bounds: d1 = {d1} must be >= d2 = {d2} > 0")]
    BadBounds { d1: f64, d2: f64 },

    #[error("invalid k = {0} (supported: 2..=4)")]
    InvalidK(usize),

    #[error("basis direction is parallel to the baseline")]
    DegenerateBasis,

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("oracle could not decide within the refinement budget")]
    Undecidable,

    #[error("non-finite coordinate")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, Error>;
