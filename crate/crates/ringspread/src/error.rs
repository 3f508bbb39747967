use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("overflow computing exp(±2 l_z) moment at m = {m}")]
    ExpMomentOverflow { m: i64 },

    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("state spec error: {0}")]
    Parse(String),

    #[error("state is not normalized (sum |c|^2 = {norm_sq}); pass --normalize to rescale")]
    NotNormalized { norm_sq: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
