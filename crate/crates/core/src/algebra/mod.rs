//! Exact rational arithmetic and sparse multivariate polynomial algebra.

mod multipoly;
mod rational;

pub use multipoly::{MultiPoly, VarSet};
pub use rational::{rational_sqrt, Rat};

/// Errors from the exact-algebra layer.
#[derive(Debug, Clone, thiserror::Error)]
pub enum AlgebraError {
    #[error("variable contexts differ: {left} vs {right}")]
    ContextMismatch { left: String, right: String },
    #[error("unknown variable `{0}` in this context")]
    UnknownVariable(String),
    #[error("exponent/point arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("cannot embed: variable `{var}` is missing from the target context")]
    NotEmbeddable { var: String },
    #[error("cannot drop variable `{var}`: it occurs in the polynomial")]
    VariableInUse { var: String },
    #[error("polynomial is not multilinear in `{var}`")]
    NotMultilinear { var: String },
    #[error("malformed rational literal `{0}`")]
    BadRational(String),
}
