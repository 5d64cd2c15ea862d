use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("quadrature did not converge: {subdivisions} panels, error estimate {error:e} > tolerance {tolerance:e}")]
    NonConvergence {
        subdivisions: usize,
        error: f64,
        tolerance: f64,
    },

    #[error("finite-difference step {step:e} underflows at coordinate scale {scale:e}")]
    StepUnderflow { step: f64, scale: f64 },

    #[error("closed-form and finite-difference derivatives disagree: relative deviation {deviation:e}")]
    CrossCheckMismatch { deviation: f64 },

    #[error("fit window holds {points} samples, at least {required} are needed")]
    WindowTooNarrow { points: usize, required: usize },

    #[error("only {usable} of {points} windowed samples lie above the numerical floor")]
    DynamicRangeExceeded { usable: usize, points: usize },

    #[error("profile never reaches the asymptotic regime (needs rho >= {rho_min}, profile ends at {rho_max})")]
    EmptyWindow { rho_min: f64, rho_max: f64 },

    #[error("invalid radial profile: {0}")]
    InvalidProfile(String),
}
