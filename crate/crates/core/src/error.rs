use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("Gamma pole at {0}")]
    Pole(f64),

    #[error("degenerate tangency at {point:?}: det dB = {det:e} (contact area = +inf)")]
    DegenerateTangency { point: Vec<f64>, det: f64 },

    #[error("transversality margin violated: smallest singular value {0:e}")]
    Transversality(f64),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("surface description: {0}")]
    SurfaceSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
