use thiserror::Error;

use crate::classify::Degeneracy;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// The variants are grouped by [`ErrorClass`], which the command-line front
/// end maps onto its exit codes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("malformed model document: {0}")]
    MalformedModel(String),
    #[error("negative weight d({i},{j}) = {value}")]
    NegativeWeight { i: i8, j: i8, value: String },
    #[error("model has no step: every weight outside (0,0) is zero")]
    EmptyModel,
    #[error("t = {0} is outside the open interval (0,1) after normalization")]
    TOutOfRange(String),
    #[error("operation requires exact rational weights")]
    NonRationalWeights,

    #[error("model is degenerate ({0})")]
    DegenerateModel(Degeneracy),
    #[error("model has genus {found}, operation requires genus {expected}")]
    WrongGenus { expected: u8, found: u8 },
    #[error("point is not on the kernel curve (relative residual {residual:.3e})")]
    OffCurveInput { residual: f64 },
    #[error("start point is the singular point of the curve")]
    StartIsSingular,
    #[error("binary quadratic slice vanishes identically")]
    IdenticallyZeroSlice,
    #[error("quartic form is identically zero")]
    ZeroForm,

    #[error("involution is indeterminate at this point")]
    IndeterminatePoint,
    #[error("branch points are not real (max |imag| = {max_imag:.3e})")]
    NonRealBranchPoints { max_imag: f64 },
    #[error("integrand changes sign inside ({lo}, {hi})")]
    SignMismatch { lo: f64, hi: f64 },
    #[error("integration endpoint {0} is not a root of the quartic")]
    NonRootEndpoints(f64),
    #[error("no candidate for the shift period lies in (0, omega2): candidates {candidates:?}")]
    Omega3OutOfRange { candidates: Vec<f64> },
    #[error("point is a lattice point (pole of the Weierstrass function)")]
    Pole,
    #[error("degenerate period lattice")]
    DegenerateLattice,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// Coarse classification of [`Error`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input does not describe a valid model, or the model is not
    /// admissible for the requested operation.
    Model,
    /// A numerical procedure failed or breached a tolerance.
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::MalformedModel(_)
            | Error::NegativeWeight { .. }
            | Error::EmptyModel
            | Error::TOutOfRange(_)
            | Error::NonRationalWeights
            | Error::DegenerateModel(_)
            | Error::WrongGenus { .. }
            | Error::OffCurveInput { .. }
            | Error::StartIsSingular
            | Error::IdenticallyZeroSlice
            | Error::ZeroForm => ErrorClass::Model,
            _ => ErrorClass::Numeric,
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedModel(_) => "MalformedModel",
            Error::NegativeWeight { .. } => "NegativeWeight",
            Error::EmptyModel => "EmptyModel",
            Error::TOutOfRange(_) => "TOutOfRange",
            Error::NonRationalWeights => "NonRationalWeights",
            Error::DegenerateModel(_) => "DegenerateModel",
            Error::WrongGenus { .. } => "WrongGenus",
            Error::OffCurveInput { .. } => "OffCurveInput",
            Error::StartIsSingular => "StartIsSingular",
            Error::IdenticallyZeroSlice => "IdenticallyZeroSlice",
            Error::ZeroForm => "ZeroForm",
            Error::IndeterminatePoint => "IndeterminatePoint",
            Error::NonRealBranchPoints { .. } => "NonRealBranchPoints",
            Error::SignMismatch { .. } => "SignMismatch",
            Error::NonRootEndpoints(_) => "NonRootEndpoints",
            Error::Omega3OutOfRange { .. } => "Omega3OutOfRange",
            Error::Pole => "Pole",
            Error::DegenerateLattice => "DegenerateLattice",
            Error::InternalInconsistency(_) => "InternalInconsistency",
        }
    }
}
