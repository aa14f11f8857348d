//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    #[error("field length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },

    #[error("density must be positive (min value {min})")]
    NonPositiveDensity { min: f64 },

    #[error("Jacobian degenerate at t = {t}: inf J = {inf_j} <= floor {floor}")]
    JacobianDegenerate { t: f64, inf_j: f64, floor: f64 },

    #[error("Newton iteration did not converge after {iters} iterations (residual {residual})")]
    NewtonDiverged { iters: usize, residual: f64 },

    #[error(
        "Picard iteration did not contract within {iters} iterations at t = {t} \
         (last change {last_change}); try a smaller dt"
    )]
    PicardNonContraction { t: f64, iters: usize, last_change: f64 },

    #[error("Gronwall horizon exceeded: sigma*c0*H^sigma*(t-T0) = {value} >= 1 at t = {critical_time}")]
    HorizonExceeded { value: f64, critical_time: f64 },

    #[error("bound envelope undefined: admissibility margin >= 1 at start of time grid")]
    EnvelopeUndefined,

    #[error("not enough snapshots: {reason}")]
    InsufficientData { reason: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
