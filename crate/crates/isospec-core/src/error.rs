//! Error type shared by all modules.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the arguments was violated.
    InvalidArgument(String),
    /// Adaptive quadrature exhausted its evaluation budget; carries the best
    /// estimate reached and the estimated error still attached to it.
    Accuracy { estimate: f64, error: f64 },
    /// A semi-infinite integral whose tail does not decay.
    Divergence(String),
    /// A coefficient or function is singular at the named point.
    Singularity { location: f64, context: String },
    /// A deformation parameter induces zeros of the denominator inside the
    /// requested domain; the zero locations are listed.
    SingularLambda { lambda: f64, zeros: Vec<f64> },
    /// A coefficient function is missing a required analytic derivative.
    MissingDerivative { order: usize, context: String },
    /// Operator not representable by the discretizer (e.g. sign-changing P).
    UnsupportedOperator(String),
    /// Requested construction does not exist for this family.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Accuracy { estimate, error } => write!(
                f,
                "quadrature did not converge: best estimate {estimate:e} with error {error:e}"
            ),
            Error::Divergence(msg) => write!(f, "divergent integral: {msg}"),
            Error::Singularity { location, context } => {
                write!(f, "singularity at x = {location}: {context}")
            }
            Error::SingularLambda { lambda, zeros } => {
                write!(f, "lambda = {lambda} is singular; denominator zeros at {zeros:?}")
            }
            Error::MissingDerivative { order, context } => {
                write!(f, "missing analytic derivative of order {order}: {context}")
            }
            Error::UnsupportedOperator(msg) => write!(f, "unsupported operator: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
