use alloc::string::String;
use core::fmt;

/// Errors raised by the computational pipelines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An element of the critical-point ring was a zero divisor.
    NonInvertible,
    /// Preconditions of a series operation (e.g. compositional inversion) failed.
    BadSeries(String),
    /// A coefficient beyond the known precision was requested.
    TruncationUnderflow { requested: i64, available: i64 },
    /// The number of completed cycles is not a non-negative integer.
    IntegralityViolation(String),
    /// The brute-force oracle refuses inputs beyond its bound.
    TooLarge { size: usize, bound: usize },
    /// An exact linear system did not determine its unknowns.
    SingularSystem,
    /// A monomial with vanishing `B_{g,n}` eigenvalue carried a nonzero right-hand side.
    NonInvertibleMonomial(String),
    /// A residue computation produced a pole away from the critical points.
    PoleEscape(String),
    /// A correlator failed its symmetry check.
    AsymmetryDetected(String),
    /// A polynomial fit needed a degree beyond the allowed bound.
    FitImpossible(String),
    /// The root-existence condition for Chiodo classes failed.
    RootConditionViolated,
    /// Malformed serialized data.
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonInvertible => write!(f, "element of the critical-point ring is not invertible"),
            Error::BadSeries(s) => write!(f, "bad series: {s}"),
            Error::TruncationUnderflow { requested, available } => write!(
                f,
                "truncation underflow: order {requested} requested, known below {available}"
            ),
            Error::IntegralityViolation(s) => write!(f, "integrality violation: {s}"),
            Error::TooLarge { size, bound } => write!(f, "size {size} exceeds oracle bound {bound}"),
            Error::SingularSystem => write!(f, "singular linear system"),
            Error::NonInvertibleMonomial(s) => write!(f, "non-invertible monomial: {s}"),
            Error::PoleEscape(s) => write!(f, "pole off the critical set: {s}"),
            Error::AsymmetryDetected(s) => write!(f, "asymmetric correlator: {s}"),
            Error::FitImpossible(s) => write!(f, "fit impossible: {s}"),
            Error::RootConditionViolated => write!(f, "root existence condition violated"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl core::error::Error for Error {}
