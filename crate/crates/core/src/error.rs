use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),

    #[error("blow-up restrictions violated: {}", .0.join(", "))]
    BlowupRestrictions(Vec<String>),

    #[error("trivial initial data (u0 vanishes identically)")]
    TrivialInitialData,

    #[error("config error: {0}")]
    Config(String),

    #[error("degenerate exponent arithmetic: {0}")]
    Exponent(String),

    #[error("Young constant check failed: {0}")]
    YoungCheck(String),

    #[error("Osgood criterion fails: gamma = {0} <= 1")]
    NotOsgood(f64),

    #[error("incompatible Poisson source: mean {mean} differs from M = {expected}")]
    IncompatibleSource { mean: f64, expected: f64 },

    #[error("non-finite state at t = {0}")]
    NonFinite(f64),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
