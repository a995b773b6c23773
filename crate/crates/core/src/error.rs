use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integral with infinite upper limit does not converge.
    #[error("divergent integral: {what}; a finite cutoff x_c is required")]
    Divergent { what: String },

    /// The observable is singular at the requested point (e.g. χ at T*_c).
    #[error("divergence at {at}: {what}")]
    Pole { what: String, at: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("{what} did not converge after {iterations} iterations (best estimate {best}, residual {residual})")]
    NonConvergence {
        what: String,
        iterations: usize,
        best: f64,
        residual: f64,
    },

    /// Quadrature failed to reach the requested accuracy.
    #[error("quadrature accuracy not reached: estimate {value} with error {error} after {subdivisions} subdivisions")]
    Accuracy {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("singular derivative: {0}")]
    SingularDerivative(String),

    #[error("unphysical parameters: {0}")]
    Unphysical(String),

    /// b* ≤ 0, i.e. the first-order regime.
    #[error("stability error: {0}")]
    Stability(String),

    #[error("unsupported dimension d = {0}")]
    UnsupportedDimension(f64),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("calibration error: {0}")]
    Calibration(String),

    #[error("invalid parameters: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by the solver rather than by the inputs.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Accuracy { .. } | Error::Calibration(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
