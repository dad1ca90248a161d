use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("x = {0} lies outside [0, 1]")]
    OutOfDomain(f64),

    /// The adaptive quadrature ran out of subdivisions before meeting its
    /// tolerances. Carries the best estimate and its error bound.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    NonConvergence { estimate: f64, error_bound: f64 },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("degenerate fit: {usable} usable point(s), at least 3 required")]
    DegenerateFit { usable: usize },

    #[error("grid point {index}: {source}")]
    GridPoint { index: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn at_index(self, index: usize) -> Self {
        Error::GridPoint {
            index,
            source: Box::new(self),
        }
    }

    /// True when this error (or the error it wraps) is a quadrature failure.
    pub fn is_non_convergence(&self) -> bool {
        match self {
            Error::NonConvergence { .. } => true,
            Error::GridPoint { source, .. } => source.is_non_convergence(),
            _ => false,
        }
    }
}

pub(crate) fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(x))
    }
}
