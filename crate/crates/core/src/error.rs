use thiserror::Error;

use crate::poly::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}' at offset {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("target degree {target} is below the polynomial degree {degree}")]
    DegreeTooLow { target: u32, degree: u32 },
    #[error("gcd of an all-zero list is undefined")]
    AllZero,
    #[error("ideal basis is not a Groebner basis")]
    NotGroebner,
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("local ideal is not primary to the maximal ideal (curves share a component through the point)")]
    NonIsolated,
    #[error("curves share a common component ({0}); the intersection count is undefined")]
    CommonComponent(String),
    #[error("the point is the image of a curve of parameters ({0})")]
    NonIsolatedFiber(String),
    #[error("generic draws kept disagreeing after {0} attempts")]
    GenericityFailure(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("moving surface does not follow the parametrization (residual {0})")]
    NotFollowing(String),
    #[error("no verified mu-basis up to degree {0}")]
    DegreeBoundExhausted(u32),
    #[error("elimination ideal is not principal ({0} generators)")]
    EliminationNotPrincipal(usize),
}

impl Error {
    /// Degenerate geometry rather than bad input or bad luck.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::NonIsolated | Error::CommonComponent(_) | Error::NonIsolatedFiber(_)
        )
    }
}
