use alloc::string::String;
use core::fmt;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numerical kernels and the simulator.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Adaptive quadrature used up its subdivision budget; the best estimate
    /// and its error bound are carried along.
    QuadratureNonConvergence { best: f64, error_bound: f64 },
    /// The objective was non-finite at more than half of the scan grid.
    MinimizeNonFinite { non_finite: usize, grid: usize },
    /// Argument outside the domain of a special function or operation.
    Domain { what: &'static str, value: f64 },
    /// Operation not defined for this noise family (e.g. infinite Fisher
    /// information).
    UnsupportedModel { what: &'static str },
    /// The received signal was exactly zero, so its phase is undefined.
    DegenerateSignal,
    /// The asymptotic covariance is numerically singular; carries the
    /// offending trigonometric variances.
    SingularCovariance { v_c: f64, v_s: f64 },
    /// A model spec string or simulation configuration failed validation.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::QuadratureNonConvergence { best, error_bound } => write!(
                f,
                "quadrature failed to converge: best estimate {best:e}, error bound {error_bound:e}"
            ),
            Error::MinimizeNonFinite { non_finite, grid } => write!(
                f,
                "objective non-finite at {non_finite} of {grid} grid points"
            ),
            Error::Domain { what, value } => write!(f, "{what}: argument {value} out of domain"),
            Error::UnsupportedModel { what } => write!(f, "unsupported model: {what}"),
            Error::DegenerateSignal => write!(f, "received signal is zero; phase undefined"),
            Error::SingularCovariance { v_c, v_s } => write!(
                f,
                "asymptotic covariance singular: v_c = {v_c:e}, v_s = {v_s:e}"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}
