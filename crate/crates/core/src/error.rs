//! Error type shared by the whole crate.
//!
//! Every failure carries a stable machine-readable code (see [`Error::code`])
//! so reports and the corpus runner can match on error kinds without parsing
//! display strings.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("ideal is not zero-dimensional: no pure power of `{0}` among the leading monomials")]
    NotZeroDimensional(String),

    #[error("germ has no isolated critical point at the origin: {0}")]
    NotIsolatedAtOrigin(String),

    #[error("germ is constant")]
    ZeroGerm,

    #[error("invalid germ: {0}")]
    InvalidGerm(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix pair is not hermitian")]
    NotHermitian,

    #[error("bezoutian reduction produced a singular matrix; the critical point is likely not isolated")]
    SingularBezoutian,

    #[error("residue normalization failed: l(Hess f) = {got} but mu = {mu}")]
    NormalizationFailure { got: String, mu: usize },

    #[error("germ is not quasi-homogeneous")]
    NotQuasiHomogeneous,

    #[error("level multiset is not symmetric about (n+1)/2")]
    AsymmetricSpectrum,

    #[error("level form at level {level} is degenerate")]
    DegenerateLevelForm { level: i64 },

    #[error("perturbed germ is not Morse: {0}")]
    NotMorse(String),

    #[error("numeric eigenvector refinement failed: {0}")]
    NoConvergence(String),

    #[error("signature calibration on the reference germ failed: {0}")]
    CalibrationFailure(String),
}

impl Error {
    /// Stable machine-readable code for this error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::NotZeroDimensional(_) => "NotZeroDimensional",
            Error::NotIsolatedAtOrigin(_) => "NotIsolatedAtOrigin",
            Error::ZeroGerm => "ZeroGerm",
            Error::InvalidGerm(_) => "InvalidGerm",
            Error::Singular => "Singular",
            Error::NotNilpotent => "NotNilpotent",
            Error::NotSymmetric => "NotSymmetric",
            Error::NotHermitian => "NotHermitian",
            Error::SingularBezoutian => "SingularBezoutian",
            Error::NormalizationFailure { .. } => "NormalizationFailure",
            Error::NotQuasiHomogeneous => "NotQuasiHomogeneous",
            Error::AsymmetricSpectrum => "AsymmetricSpectrum",
            Error::DegenerateLevelForm { .. } => "DegenerateLevelForm",
            Error::NotMorse(_) => "NotMorse",
            Error::NoConvergence(_) => "NoConvergence",
            Error::CalibrationFailure(_) => "CalibrationFailure",
        }
    }
}
