use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("λ = {0} lies on the branch cut (−∞, −1/4]")]
    OnBranchCut(Complex64),

    #[error("{0} requires ε > 0 (finite Lewis number)")]
    RequiresFiniteLewis(&'static str),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("|f| = {modulus:.3e} on the contour near {at}; perturb the rectangle and retry")]
    BoundaryZero { at: Complex64, modulus: f64 },

    #[error("Newton did not converge after {iterations} iterations (last |f| = {residual:.3e}, trace: {trace:?})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        trace: Vec<f64>,
    },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("degree degeneration: {0}")]
    DegreeDegeneration(String),

    #[error("uniqueness violated at ε = {epsilon}: found {found} purely imaginary pairs")]
    Uniqueness { epsilon: f64, found: usize },

    #[error("degenerate derivative: |∂D/∂λ| = {0:.3e}")]
    DegenerateDerivative(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("bracketing failed: {0}")]
    Bracket(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("simulation unstable at τ = {tau}: {reason}")]
    Unstable { tau: f64, reason: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
