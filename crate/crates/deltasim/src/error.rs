//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A perturbative denominator |ω − Ω_λ| fell below the safety threshold.
    #[error("resonant denominator for normal mode {lambda}: |{omega_name} - Omega_{lambda}| = {value:.3e} < {threshold:.3e} rad/us")]
    ResonantDenominator {
        lambda: char,
        omega_name: &'static str,
        value: f64,
        threshold: f64,
    },

    /// Coupling ratios violate the bright/dark factorization conditions.
    #[error("proportionality violated at component {index}: ratio {found:.6e} differs from {expected:.6e} by more than {tolerance:.1e}")]
    ProportionalityViolated {
        index: usize,
        found: f64,
        expected: f64,
        tolerance: f64,
    },

    #[error("config error ({location}): {message}")]
    Config { location: String, message: String },

    #[error("linear system is singular or ill-conditioned (rcond estimate {rcond:.3e})")]
    IllConditioned { rcond: f64 },

    #[error("solver failure at t = {time} us: {message}")]
    Solver { time: f64, message: String },

    #[error("state validation failed: {0}")]
    InvalidState(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
