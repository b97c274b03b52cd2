use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive Jacobian: det F = {0:e}")]
    NonPositiveJacobian(f64),
    #[error("matrix is not positive definite (min eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("singular matrix (|det| = {0:e})")]
    SingularMatrix(f64),
    #[error("tensor is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("energy derivative callback failed: {0}")]
    CallbackFailure(String),
    #[error("midpoint configuration F_n + F_n+1 is singular; increment too large")]
    SingularMidpoint,
    #[error("strain increment norm {0:.4} exceeds the 0.2 limit")]
    TooLargeIncrement(f64),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("element {element} inverted at Gauss point {gauss_point} (det F = {det:e})")]
    ElementInverted {
        element: usize,
        gauss_point: usize,
        det: f64,
    },
    #[error(
        "Newton iteration did not converge in {iterations} iterations (residual {residual:e})"
    )]
    NewtonDiverged { iterations: usize, residual: f64 },
    #[error("linear solve failed: {0}")]
    LinearSolveFailure(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<Error> },
    #[error("pathway {pathway}: {source}")]
    InPathway {
        pathway: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    pub fn at_step(self, step: usize) -> Self {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }

    pub fn in_pathway(self, pathway: &'static str) -> Self {
        Error::InPathway {
            pathway,
            source: Box::new(self),
        }
    }

    /// Innermost error, with step/pathway labels stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } | Error::InPathway { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(
            self.root(),
            Error::Config(_) | Error::UnknownScenario(_) | Error::InvalidDimension(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
