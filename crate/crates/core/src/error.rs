use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular argument {value}: K diverges at 1 (cutoff 1 - 1e-12)")]
    Singular { value: f64 },

    #[error(
        "series did not converge within {cap} terms (last term {last_term:e}, ratio {ratio:.4})"
    )]
    NonConvergence {
        cap: usize,
        last_term: f64,
        ratio: f64,
    },

    #[error(
        "theta value {value:e} is too close to zero (scale {scale:e}); log-derivative has a pole"
    )]
    Pole { value: f64, scale: f64 },

    #[error("derivative order {0} is not supported (maximum 12)")]
    UnsupportedOrder(usize),

    #[error("parameter {value} outside supported range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("polynomial does not satisfy the required shape: {0}")]
    PolynomialShape(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("identity `{identity}` has no variant `{variant}`")]
    UnknownVariant { identity: String, variant: String },

    #[error("grid point violates domain constraint: {0}")]
    Constraint(String),

    #[error("invalid {field}: {message}")]
    Config { field: String, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }

    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_owned(),
            message: message.into(),
        }
    }
}
