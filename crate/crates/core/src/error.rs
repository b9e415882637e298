use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate shape: minimum radius {min_radius} is below {threshold}")]
    DegenerateShape { min_radius: f64, threshold: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("set is not star-shaped about the origin: {0}")]
    NotStarShaped(String),

    #[error("shape is not volume-normalized: area {area}, expected π")]
    NotNormalized { area: f64 },

    #[error("quotient undefined: asymmetry {asymmetry:e} is indistinguishable from the ball")]
    BallLike { asymmetry: f64 },

    #[error("boundary does not meet the ball of radius {radius} centered at ({cx}, {cy})")]
    EmptyBoundary { cx: f64, cy: f64, radius: f64 },

    #[error("requested degree {degree} exceeds N/4 = {limit} for {samples} samples")]
    Alias { degree: usize, limit: usize, samples: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate denominator: L1 distance {0:e} to the first harmonics")]
    DegenerateDenominator(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
