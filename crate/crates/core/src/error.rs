use thiserror::Error;

/// Errors raised by the library. Each variant belongs to one of the
/// disjoint failure classes reported by [`Error::class`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    InvalidInput(String),

    #[error("eigenvalue {lambda} equals -1/4 and belongs to the q0 block")]
    LambdaInQ0Block { lambda: f64 },

    #[error("eigenvalue {lambda} >= 3/4 is in the limit point case and admits no boundary freedom")]
    LimitPoint { lambda: f64 },

    #[error("not a Lagrangian pair: {0}")]
    NotLagrangian(String),

    #[error(
        "operator has a nontrivial kernel (|F(0)| = {f0_abs:.3e}); the closed-form determinant \
         requires ker L_L = {{0}} and the regularization of the kernel case is not covered"
    )]
    NontrivialKernel { f0_abs: f64 },

    #[error("degenerate determinant polynomial: p(x, y) vanishes identically")]
    DegenerateDeterminant,

    #[error("row/column condition violated: {0}")]
    RowColumnCondition(String),

    #[error("extension lacks the structure this method needs: {0}")]
    StructureMismatch(String),

    #[error("contour hit: {0}")]
    ContourHit(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

/// Coarse failure class, used by front ends to map onto exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Extension,
    Kernel,
    Degenerate,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) | Error::LambdaInQ0Block { .. } | Error::LimitPoint { .. } => {
                ErrorClass::Input
            }
            Error::NotLagrangian(_) | Error::RowColumnCondition(_) | Error::StructureMismatch(_) => {
                ErrorClass::Extension
            }
            Error::NontrivialKernel { .. } => ErrorClass::Kernel,
            Error::DegenerateDeterminant => ErrorClass::Degenerate,
            Error::ContourHit(_) | Error::Numeric(_) => ErrorClass::Numeric,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
