use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the simulation core.
///
/// Variants split into two families: bad input ([`Error::is_validation`])
/// and numerical failure (everything else). The CLI maps them to distinct
/// exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is out of its admissible range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// A transfer function was evaluated on (or numerically at) a pole.
    PoleEvaluation { omega: f64 },
    /// The response vanishes, so its phase is undefined.
    UndefinedPhase { omega: f64 },
    /// An unstable filter was handed to a consumer that requires stability.
    UnstableFilter,
    /// Composition would exceed the polynomial degree cap.
    DegreeOverflow { degree: usize, cap: usize },
    /// Polynomial coefficients became non-finite.
    CoefficientOverflow,
    /// Root finding did not reach the residual bound.
    RootFinding { degree: usize, residual: f64 },
    /// An iterative solver failed to converge.
    NoConvergence { what: &'static str },
    /// Circular wraparound energy stayed above threshold at the padding cap.
    Wraparound { fraction: f64, pad_factor: usize },
    /// A cascade stage grew beyond the amplitude ceiling.
    AmplitudeOverflow { stage: usize, ratio: f64 },
    /// Global maximum lies on the window edge.
    PeakAtEdge,
    /// Global maximum is a plateau wider than three samples.
    AmbiguousPeak { width: usize },
    /// Input energy is zero.
    ZeroEnergy,
    /// Total transit time is zero, group velocity is unbounded.
    SingularVelocity,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }

    /// True for errors caused by invalid input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::UnstableFilter | Error::DegreeOverflow { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::PoleEvaluation { omega } => {
                write!(f, "transfer function evaluated at a pole (omega = {omega})")
            }
            Error::UndefinedPhase { omega } => {
                write!(f, "response vanishes at omega = {omega}; phase undefined")
            }
            Error::UnstableFilter => write!(f, "filter has poles in the right half p-plane"),
            Error::DegreeOverflow { degree, cap } => {
                write!(f, "polynomial degree {degree} exceeds cap {cap}; use a Cascade")
            }
            Error::CoefficientOverflow => write!(f, "polynomial coefficients overflowed"),
            Error::RootFinding { degree, residual } => write!(
                f,
                "root finding failed for degree {degree} polynomial (relative residual {residual:e})"
            ),
            Error::NoConvergence { what } => write!(f, "{what} did not converge"),
            Error::Wraparound {
                fraction,
                pad_factor,
            } => write!(
                f,
                "circular wraparound energy fraction {fraction:e} at pad factor {pad_factor}"
            ),
            Error::AmplitudeOverflow { stage, ratio } => write!(
                f,
                "cascade stage {stage} amplitude is {ratio:e} times the input peak; output is dominated by out-of-band gain"
            ),
            Error::PeakAtEdge => write!(f, "signal maximum lies on the window edge"),
            Error::AmbiguousPeak { width } => {
                write!(f, "signal maximum is a plateau of {width} samples")
            }
            Error::ZeroEnergy => write!(f, "input signal has zero energy"),
            Error::SingularVelocity => write!(f, "total transit time is zero"),
        }
    }
}

impl core::error::Error for Error {}
