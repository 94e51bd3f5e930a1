use thiserror::Error;

/// Errors raised by the computational layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("basis construction failed: {0}")]
    BasisConstruction(String),

    #[error("energy {energy} Hartree is within {distance:e} of basis eigenvalue {eigenvalue} in the l = {l} channel")]
    Resonance {
        energy: f64,
        eigenvalue: f64,
        distance: f64,
        l: usize,
    },

    #[error("energy {energy} Hartree lies above the ionization threshold; a complex-scaled basis is required")]
    ThresholdRequiresScaling { energy: f64 },

    #[error("linear solve failed: {0}")]
    SolveFailure(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("relative deviation undefined: classical shift is zero")]
    UndefinedDeviation,

    #[error("unreliable shift extraction: fit residual {residual:e} exceeds 5% of slope {slope:e}")]
    UnreliableExtraction { residual: f64, slope: f64 },

    #[error("step-size instability: norm drift {0:e}")]
    StepInstability(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
