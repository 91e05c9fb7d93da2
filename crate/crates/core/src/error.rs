use core::fmt;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a function or law.
    Domain(&'static str),
    /// Malformed system or state description.
    InvalidSpec(&'static str),
    /// The envelope equations have no root; `delta` carries the Lambert argument when known.
    NoBoundState { delta: Option<f64> },
    /// An iteration hit its cap without meeting tolerance.
    NonConvergence(&'static str),
    /// Observable requested on a modified-ET state whose components mix Q0 values.
    MixedQ0,
    /// Negative radial stiffness around the orbital point.
    NegativeStiffness(f64),
    /// Target energy not reachable inside the calibration bracket.
    NoRoot,
    /// All bands of an oracle configuration are forbidden by symmetry.
    EmptyBasis,
    /// Energy is monotone over the whole scale bracket.
    NoMinimum,
    /// System outside what the variational oracle handles.
    UnsupportedSystem(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::InvalidSpec(m) => write!(f, "invalid specification: {m}"),
            Error::NoBoundState { delta: Some(d) } => {
                write!(f, "no bound state (lambert argument {d:.6e} below -1/e)")
            }
            Error::NoBoundState { delta: None } => write!(f, "no bound state"),
            Error::NonConvergence(m) => write!(f, "no convergence: {m}"),
            Error::MixedQ0 => write!(f, "observable undefined: components mix different Q0"),
            Error::NegativeStiffness(k) => write!(f, "negative radial stiffness k = {k:.6e}"),
            Error::NoRoot => write!(f, "target energy not reachable in the phi bracket"),
            Error::EmptyBasis => write!(f, "every band is forbidden for this symmetry"),
            Error::NoMinimum => write!(f, "energy is monotone over the scale bracket"),
            Error::UnsupportedSystem(m) => write!(f, "unsupported system: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
