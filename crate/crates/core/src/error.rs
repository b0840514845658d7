use thiserror::Error;

use crate::spectrum::SystemId;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GhaError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("level {level} is out of range (highest representable level is {max})")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("characteristic function of {system} is undefined at x = {x}")]
    Domain { system: SystemId, x: f64 },

    #[error("negative gap at level {level}: f(e_n) - e_0 = {gap}")]
    NegativeGap { level: usize, gap: f64 },

    #[error("degenerate Morse parameter p = {0}: integer p puts the top level at zero energy")]
    DegenerateMorse(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("r = {r} is outside the convergence domain (radius {radius})")]
    RadiusOfConvergence { r: f64, radius: f64 },

    #[error("degenerate spectrum: ladder coefficient N_{level} vanishes")]
    DegenerateSpectrum { level: usize },

    #[error("dimension {dim} leaves tail mass {tail:e} above {bound:e}")]
    TailBound { dim: usize, tail: f64, bound: f64 },

    #[error("series did not converge within {cap} terms")]
    Convergence { cap: usize },

    #[error("expectation value of {operator} has imaginary part {imag:e}")]
    ImaginaryResidual { operator: &'static str, imag: f64 },

    #[error("negative variance {0:e} beyond tolerance")]
    NegativeVariance(f64),

    #[error("{operation} is not available for {system}")]
    WrongSystem { operation: &'static str, system: SystemId },

    #[error("config error on line {line}: {message}")]
    Config { line: usize, message: String },
}

pub type Result<T, E = GhaError> = std::result::Result<T, E>;
