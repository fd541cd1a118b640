use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("eigen-solver failed to converge (dim {dim}, condition estimate {condition:e})")]
    EigenNonConvergence { dim: usize, condition: f64 },

    #[error("eigenvalue {eigenvalue} lies outside the domain ({lo}, {hi}) of `{function}`")]
    SpectrumDomain {
        function: String,
        eigenvalue: f64,
        lo: f64,
        hi: f64,
    },

    #[error("matrix `{name}` is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { name: String, min_eigenvalue: f64 },

    #[error("eta measure with lambda = {lambda} is a point mass; integrate it instead of asking for a density")]
    PointMass { lambda: f64 },

    #[error("quadrature did not converge after {nodes} nodes: last estimates differ by {difference:e} (tolerance {tolerance:e})")]
    Quadrature {
        nodes: usize,
        previous: f64,
        last: f64,
        difference: f64,
        tolerance: f64,
    },

    #[error("parameter `{name}` = {value} is out of range: {reason}")]
    Parameter {
        name: String,
        value: f64,
        reason: String,
    },

    #[error("unknown chain `{0}`")]
    UnknownChain(String),

    #[error("unknown test function `{0}`")]
    UnknownFunction(String),

    #[error("chain `{chain}`: {reason}")]
    ChainConfig { chain: String, reason: String },

    #[error("malformed matrix file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn param(name: &str, value: f64, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name: name.to_string(),
            value,
            reason: reason.into(),
        }
    }
}
