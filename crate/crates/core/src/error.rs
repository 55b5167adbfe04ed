use crate::numeric::ProjectivePoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("non-finite value in input")]
    NonFinite,
    #[error("singular curve (singular point {witness})")]
    SingularCurve { witness: ProjectivePoint },
    #[error("degenerate elimination: {0}")]
    DegenerateElimination(String),
    #[error("identity must be an inflection point")]
    NotInflection,
    #[error("ill-conditioned chord")]
    IllConditionedChord,
    #[error("order {0} out of supported range")]
    OrderOutOfRange(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("identity fixes everything")]
    IdentityFixesEverything,
    #[error("degenerate fixed point")]
    DegenerateFixedPoint,
    #[error("set not invariant")]
    NotInvariant,
    #[error("generated group exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("normalization failed (best residual {0:.3e})")]
    NormalizationFailed(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("path hits discriminant (margin {margin:.3e} at t = {t})")]
    PathHitsDiscriminant { t: f64, margin: f64 },
    #[error("tracking ambiguity at t = {0}")]
    TrackingAmbiguity(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::NonFinite
            | Error::ZeroVector
            | Error::ZeroPolynomial
            | Error::ConstantPolynomial
            | Error::NotInflection
            | Error::OrderOutOfRange(_)
            | Error::IdentityFixesEverything
            | Error::SingularMatrix
            | Error::NotInvariant => 2,
            Error::SingularCurve { .. } => 3,
            Error::TrackingAmbiguity(_) | Error::PathHitsDiscriminant { .. } => 5,
            _ => 4,
        }
    }
}
