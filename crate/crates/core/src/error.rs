use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite {what} at x = {x:?}, t = {t}")]
    NonFiniteData { what: &'static str, x: [f64; 3], t: f64 },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("slab {slab}: solver stopped after {iterations} iterations with residual {residual:.3e}")]
    NotConverged { slab: usize, iterations: usize, residual: f64 },

    #[error("measurement table: {0}")]
    Measurements(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
