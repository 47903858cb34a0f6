use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {0} lies within the pole tolerance of a non-positive integer")]
    Pole(Complex64),
    #[error("branch point at zero")]
    BranchPoint,
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },
    #[error("asymptotic series diverges from its first correction (|term| = {first_term})")]
    AsymptoticDivergence { first_term: f64 },
    #[error("limit in the denominator parameter is unstable (relative spread {spread:e})")]
    DegenerateLimitUnstable { spread: f64 },
    #[error("unsupported case: {0}")]
    UnsupportedCase(&'static str),
    #[error("index 2m = {0} is too close to an integer for this formula")]
    DegenerateCase(Complex64),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("(beta, m) = (0, -1/2) is the singular point of the family")]
    SingularFamilyPoint,
    #[error("spectral parameter hits the eigenvalue pole at k = {0}")]
    PoleAtEigenvalue(Complex64),
    #[error("k = {0} is an exceptional energy for these parameters")]
    ExceptionalEnergy(f64),
    #[error("index {0} does not label an eigenvalue")]
    NotAnEigenvalue(usize),
    #[error("operation requires real beta and m")]
    RealOnly,
    #[error("integration step collapsed below {0:e} at x = {1}")]
    StiffnessFailure(f64, f64),
    #[error("small-x series is not applicable for these parameters")]
    SeriesNotApplicable,
}

impl Error {
    /// Stable short name for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Pole(_) => "pole",
            Error::BranchPoint => "branch-point",
            Error::NoConvergence { .. } => "no-convergence",
            Error::AsymptoticDivergence { .. } => "asymptotic-divergence",
            Error::DegenerateLimitUnstable { .. } => "degenerate-limit-unstable",
            Error::UnsupportedCase(_) => "unsupported",
            Error::DegenerateCase(_) => "degenerate",
            Error::Domain(_) => "domain",
            Error::SingularFamilyPoint => "singular-family-point",
            Error::PoleAtEigenvalue(_) => "pole-at-eigenvalue",
            Error::ExceptionalEnergy(_) => "exceptional",
            Error::NotAnEigenvalue(_) => "not-an-eigenvalue",
            Error::RealOnly => "real-only",
            Error::StiffnessFailure(..) => "stiffness",
            Error::SeriesNotApplicable => "series-not-applicable",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
