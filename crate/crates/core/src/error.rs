use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    InvalidArgument(&'static str),
    /// An iterative routine hit its iteration cap.
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },
    ResampleCapExceeded {
        attempts: usize,
    },
    WindowOverflow {
        span: i64,
        cap: i64,
    },
    SymmetryViolated {
        residual: f64,
    },
    SingularSystem {
        routine: &'static str,
    },
    ResidualTooLarge {
        routine: &'static str,
        residual: f64,
        tol: f64,
    },
    Aliasing {
        estimate: f64,
        tol: f64,
    },
    NonFinite {
        step: usize,
    },
    IllConditioned {
        routine: &'static str,
    },
    InconsistentSolution {
        what: &'static str,
        defect: f64,
        tol: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NoConvergence { routine, iterations } => {
                write!(f, "{routine} did not converge after {iterations} iterations")
            }
            Error::ResampleCapExceeded { attempts } => {
                write!(f, "no acceptable sample after {attempts} attempts")
            }
            Error::WindowOverflow { span, cap } => {
                write!(f, "loop degree span {span} exceeds cap {cap}")
            }
            Error::SymmetryViolated { residual } => {
                write!(f, "loop symmetry g(z)g(-z)^T = I violated (residual {residual:e})")
            }
            Error::SingularSystem { routine } => write!(f, "{routine}: singular system"),
            Error::ResidualTooLarge { routine, residual, tol } => {
                write!(f, "{routine}: residual {residual:e} above {tol:e}")
            }
            Error::Aliasing { estimate, tol } => {
                write!(f, "aliasing estimate {estimate:e} above {tol:e}; increase resolution")
            }
            Error::NonFinite { step } => write!(f, "state became non-finite at step {step}"),
            Error::IllConditioned { routine } => write!(f, "{routine}: ill-conditioned"),
            Error::InconsistentSolution { what, defect, tol } => {
                write!(f, "{what}: defect {defect:e} above {tol:e}")
            }
        }
    }
}

impl core::error::Error for Error {}
