use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("curve has zero total length")]
    ZeroLength,
    #[error("grid size {0} is too small (need at least 2)")]
    BadGrid(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sample {index} is not a unit vector (norm {norm})")]
    NotUnit { index: usize, norm: f64 },
    #[error("ambiguous angle lift between samples {index} and {}", index + 1)]
    LiftJump { index: usize },
    #[error("function has zero total variation")]
    ZeroVariation,
    #[error("sigma = {0} violates 2*sigma >= 1")]
    BadSigma(f64),
    #[error("grid mismatch: {0} vs {1} samples")]
    GridMismatch(usize, usize),
    #[error("path has negative or non-finite reparametrization density at time {time_index}, piece {piece}")]
    DegeneratePath { time_index: usize, piece: usize },
    #[error("degenerate sphere endpoints (rho = {rho}): antipodal or coincident endpoints, omega/(2 sigma) = pi mod 2 pi")]
    DegenerateEndpoints { rho: f64 },
    #[error("lifted end angle deviates from omega/(2 sigma) by {deviation} at piece {piece}")]
    InvalidLift { piece: usize, deviation: f64 },
    #[error("antipodal unit vectors: interpolation plane is undefined")]
    AntipodalPair,
    #[error("curve is not flagged closed")]
    NotClosed,
    #[error("frame is not orthonormal: |f|^2 = {ff}, |g|^2 = {gg}, <f,g> = {fg}")]
    BadFrame { ff: f64, gg: f64, fg: f64 },
    #[error("closing projection did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("invalid diffeomorphism: {0}")]
    BadDiffeo(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl Error {
    /// Process exit status: 2 for unreadable input, 3 for invalid
    /// configuration or input class, 4 for degenerate geometry.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) => 2,
            Error::DegenerateEndpoints { .. }
            | Error::DegeneratePath { .. }
            | Error::InvalidLift { .. }
            | Error::AntipodalPair
            | Error::NoConvergence(_)
            | Error::LiftJump { .. }
            | Error::ZeroLength
            | Error::ZeroVariation => 4,
            _ => 3,
        }
    }
}
