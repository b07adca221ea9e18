use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VcError {
    #[error("domain error: {0}")]
    Domain(String),

    /// The Cherenkov cosine fell outside (0, 1); the offending value is kept.
    #[error("no Cherenkov emission: cos(theta_kp) = {cos_theta} is outside (0, 1)")]
    NoCherenkovEmission { cos_theta: f64 },

    #[error("photon angle {theta_g} rad is outside the overlap interval ({lower}, {upper})")]
    OutsideOverlap { theta_g: f64, lower: f64, upper: f64 },

    #[error("kinematically forbidden: {0}")]
    KinematicallyForbidden(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, VcError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(VcError::Domain(msg.into()))
}
