use thiserror::Error;

/// Errors raised by the geometric and numerical operations.
///
/// The `Display` output starts with the variant name so that the CLI can
/// report it verbatim on stderr.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ZeroDivisor: {0}")]
    ZeroDivisor(String),
    #[error("PoleAt: {0}")]
    PoleAt(String),
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("NormalizationFailure: {0}")]
    NormalizationFailure(String),
    #[error("NotComparable: {0}")]
    NotComparable(String),
    #[error("BaseMismatch: {0}")]
    BaseMismatch(String),
    #[error("DegenerateNormal: {0}")]
    DegenerateNormal(String),
    #[error("NoIntersection: {0}")]
    NoIntersection(String),
    #[error("NotLightlike: {0}")]
    NotLightlike(String),
    #[error("NoCommonPoint: {0}")]
    NoCommonPoint(String),
    #[error("NotSpacelikeConnected: {0}")]
    NotSpacelikeConnected(String),
    #[error("Degenerate: {0}")]
    Degenerate(String),
    #[error("WrongCausalClass: {0}")]
    WrongCausalClass(String),
    #[error("Inadmissible: {0}")]
    Inadmissible(String),
    #[error("NotATetrahedron: {0}")]
    NotATetrahedron(String),
    #[error("ChartInversionFailure: {0}")]
    ChartInversionFailure(String),
    #[error("ToleranceNotReached: estimate {estimate} with error bound {error}")]
    ToleranceNotReached { estimate: f64, error: f64 },
    #[error("ConvergenceWarning: series evaluated outside its disc of convergence (value {value}, radius {radius})")]
    ConvergenceWarning { value: f64, radius: f64 },
}

impl Error {
    /// Name of the variant, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroDivisor(_) => "ZeroDivisor",
            Error::PoleAt(_) => "PoleAt",
            Error::DomainError(_) => "DomainError",
            Error::NormalizationFailure(_) => "NormalizationFailure",
            Error::NotComparable(_) => "NotComparable",
            Error::BaseMismatch(_) => "BaseMismatch",
            Error::DegenerateNormal(_) => "DegenerateNormal",
            Error::NoIntersection(_) => "NoIntersection",
            Error::NotLightlike(_) => "NotLightlike",
            Error::NoCommonPoint(_) => "NoCommonPoint",
            Error::NotSpacelikeConnected(_) => "NotSpacelikeConnected",
            Error::Degenerate(_) => "Degenerate",
            Error::WrongCausalClass(_) => "WrongCausalClass",
            Error::Inadmissible(_) => "Inadmissible",
            Error::NotATetrahedron(_) => "NotATetrahedron",
            Error::ChartInversionFailure(_) => "ChartInversionFailure",
            Error::ToleranceNotReached { .. } => "ToleranceNotReached",
            Error::ConvergenceWarning { .. } => "ConvergenceWarning",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
